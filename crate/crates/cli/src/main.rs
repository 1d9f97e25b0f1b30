//! `sunsizer`: size a standalone PV + battery system from hourly weather and
//! load data, trading cost of energy against loss of load probability.

mod commands;
mod config;
mod error;
mod ingest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::AlgoChoice;

#[derive(Parser)]
#[command(name = "sunsizer", version, about = "Standalone PV/battery sizing by multi-objective search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the optimizer(s), then write front, surface, sweep and summary files
    Optimize {
        /// Optimizer to run (mopso, nsga2, both)
        #[arg(long, value_enum)]
        algo: Option<AlgoChoice>,
        /// Key-value config file; flags override its entries
        #[arg(long)]
        config: Option<PathBuf>,
        /// RNG seed; identical seeds give byte-identical CSVs
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (created if missing)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the cheapest design meeting the reliability bound per DOD value
    SweepDod {
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        /// Highest acceptable loss of load probability (fraction)
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_enum)]
        algo: Option<AlgoChoice>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate one design and dump its hourly trace
    Simulate {
        /// Number of PV panels
        #[arg(long)]
        n_pv: u32,
        /// Number of battery units
        #[arg(long)]
        n_bes: u32,
        /// Depth of discharge in (0, 1]
        #[arg(long)]
        dod: f64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate synthetic weather.csv and load.csv
    GenData {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        days: Option<u32>,
        #[arg(long)]
        peak_load: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every design on a grid and write the exact front
    BruteForce {
        /// Grid spec, e.g. "n_pv=0..120:10;n_bes=0..60:5;dod=0.2..0.8:0.1"
        #[arg(long)]
        grid: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute plot CSVs and the comparison from a previous run's fronts
    Report {
        /// Directory holding front_*.csv from a prior optimize run
        #[arg(long)]
        run: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> error::Result<()> {
    match cli.command {
        Command::Optimize { algo, config, seed, out } => {
            commands::optimize(config.as_deref(), algo, seed, out.as_deref())
        }
        Command::SweepDod { from, to, step, epsilon, algo, config, seed, out } => {
            commands::sweep_dod(
                config.as_deref(),
                from,
                to,
                step,
                epsilon,
                algo,
                seed,
                out.as_deref(),
            )
        }
        Command::Simulate { n_pv, n_bes, dod, config, out } => {
            commands::simulate_design(config.as_deref(), n_pv, n_bes, dod, out.as_deref())
        }
        Command::GenData { seed, days, peak_load, config, out } => {
            commands::gen_data(config.as_deref(), seed, days, peak_load, out.as_deref())
        }
        Command::BruteForce { grid, config, out } => {
            commands::brute_force(config.as_deref(), &grid, out.as_deref())
        }
        Command::Report { run, epsilon, config } => {
            commands::report(config.as_deref(), run.as_deref(), epsilon)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
