//! Subcommand implementations. Each returns `Err` on any failure so `main`
//! can map every error path to a nonzero exit status.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sunsizer_core::econ::{annualized_total_cost, battery_life_years};
use sunsizer_core::mopso::run_mopso;
use sunsizer_core::nsga2::run_nsga2;
use sunsizer_core::pareto::{knee_index, ObjectivePoint};
use sunsizer_core::problem::{Problem, VarBound};
use sunsizer_core::simulate::{compute_llp, simulate};
use sunsizer_core::sizing::Algorithm;
use sunsizer_core::synth::generate_synthetic;
use sunsizer_core::system::pv_power;
use sunsizer_core::{AnnualDataset64, Design64, GridSpec64, SizingProblem64};

use crate::config::{sweep_dods, AlgoChoice, RunConfig};
use crate::error::{CliError, Result};
use crate::ingest::ingest_dataset;
use crate::output::{
    fmt_f64, fmt_llp_percent, front_csv, front_path, prepare_out_dir, read_front_csv, sort_front,
    surface_csv, surface_path, sweep_csv, sweep_path, write_text, FrontRow,
};

pub fn build_dataset(config: &RunConfig) -> Result<AnnualDataset64> {
    match (&config.weather, &config.load) {
        (Some(weather), Some(load)) => ingest_dataset(weather, load),
        _ => Ok(generate_synthetic(&config.synth)?),
    }
}

pub fn build_problem(config: &RunConfig, dataset: AnnualDataset64) -> Result<SizingProblem64> {
    let mut problem =
        SizingProblem64::new(dataset, config.pv.clone(), config.battery.clone(), config.costs.clone())?;
    problem.set_denominator(config.denominator);
    let overridden = [config.n_pv_max, config.n_bes_max, config.dod_min, config.dod_max];
    if overridden.iter().any(|o| o.is_some()) {
        let current = problem.bounds().to_vec();
        let bounds = [
            VarBound::integer(0.0, config.n_pv_max.unwrap_or(current[0].high)),
            VarBound::integer(0.0, config.n_bes_max.unwrap_or(current[1].high)),
            VarBound::continuous(
                config.dod_min.unwrap_or(current[2].low),
                config.dod_max.unwrap_or(current[2].high),
            ),
        ];
        problem.set_bounds(bounds)?;
    }
    Ok(problem)
}

fn selected(algo: AlgoChoice) -> Vec<(Algorithm, &'static str)> {
    match algo {
        AlgoChoice::Mopso => vec![(Algorithm::Mopso, "mopso")],
        AlgoChoice::Nsga2 => vec![(Algorithm::Nsga2, "nsga2")],
        AlgoChoice::Both => vec![(Algorithm::Mopso, "mopso"), (Algorithm::Nsga2, "nsga2")],
    }
}

fn run_front(problem: &SizingProblem64, config: &RunConfig, algorithm: Algorithm) -> Vec<FrontRow> {
    let entries: Vec<(Vec<f64>, ObjectivePoint<f64>)> = match algorithm {
        Algorithm::Mopso => {
            let archive = run_mopso(problem, &config.mopso_params());
            archive.entries().to_vec()
        }
        Algorithm::Nsga2 => run_nsga2(problem, &config.nsga2_params()),
    };
    let mut rows: Vec<FrontRow> = entries
        .iter()
        .map(|(position, point)| FrontRow::new(problem.design_of(position), point))
        .collect();
    sort_front(&mut rows);
    rows
}

fn best_feasible(rows: &[FrontRow], epsilon: f64) -> Option<&FrontRow> {
    rows.iter()
        .filter(|r| r.llp <= epsilon)
        .min_by(|a, b| a.coe.total_cmp(&b.coe))
}

fn knee_of(rows: &[FrontRow]) -> Option<&FrontRow> {
    let points: Vec<ObjectivePoint<f64>> =
        rows.iter().map(|r| ObjectivePoint::new(vec![r.coe, r.llp])).collect();
    knee_index(&points).map(|i| &rows[i])
}

fn describe_row(row: &FrontRow) -> String {
    format!(
        "n_pv={} n_bes={} dod={} coe={} llp={}",
        row.design.n_pv,
        row.design.n_bes,
        fmt_f64(row.design.dod),
        fmt_f64(row.coe),
        fmt_llp_percent(row.llp)
    )
}

pub fn optimize(
    config_path: Option<&Path>,
    algo: Option<AlgoChoice>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<()> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(algo) = algo {
        config.algo = algo;
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.out = out.to_path_buf();
    }
    prepare_out_dir(&config.out)?;

    let dataset = build_dataset(&config)?;
    let problem = build_problem(&config, dataset)?;
    let dods = sweep_dods(config.sweep_from, config.sweep_to, config.sweep_step)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "sunsizer run summary");
    let _ = writeln!(summary, "====================");
    let _ = writeln!(summary);
    let _ = writeln!(summary, "seed: {}", config.seed);
    let _ = writeln!(
        summary,
        "dataset: {} hours, total load {:.1} kWh, peak {:.2} kW",
        problem.dataset().len(),
        problem.dataset().total_load(),
        problem.dataset().peak_load()
    );
    let b = problem.bounds();
    let _ = writeln!(
        summary,
        "bounds: n_pv [{}, {}], n_bes [{}, {}], dod [{}, {}]",
        b[0].low, b[0].high, b[1].low, b[1].high, b[2].low, b[2].high
    );
    let _ = writeln!(summary, "reliability bound: llp <= {}", fmt_llp_percent(config.epsilon));
    let _ = writeln!(summary);

    let mut comparison: Vec<(&'static str, Option<FrontRow>, Option<FrontRow>)> = Vec::new();
    for (algorithm, name) in selected(config.algo) {
        let started = Instant::now();
        let rows = run_front(&problem, &config, algorithm);
        let front_ms = started.elapsed().as_millis();

        write_text(&front_path(&config.out, name), &front_csv(&rows))?;
        write_text(&surface_path(&config.out, name), &surface_csv(&rows))?;

        let started = Instant::now();
        let sweep = problem.dod_sweep(&dods, config.epsilon, algorithm, config.seed)?;
        let sweep_ms = started.elapsed().as_millis();
        write_text(&sweep_path(&config.out, name), &sweep_csv(&sweep))?;

        let best = best_feasible(&rows, config.epsilon).copied();
        let knee = knee_of(&rows).copied();

        let _ = writeln!(summary, "algorithm: {name}");
        match algorithm {
            Algorithm::Mopso => {
                let p = config.mopso_params();
                let _ = writeln!(
                    summary,
                    "  swarm {}, iterations {}, archive capacity {}",
                    p.swarm_size, p.iterations, p.archive_capacity
                );
            }
            Algorithm::Nsga2 => {
                let p = config.nsga2_params();
                let _ = writeln!(summary, "  population {}, generations {}", p.population, p.generations);
            }
        }
        let _ = writeln!(summary, "  front size: {}", rows.len());
        let _ = writeln!(summary, "  optimize time: {front_ms} ms");
        let _ = writeln!(summary, "  sweep time: {sweep_ms} ms");
        match &best {
            Some(row) => {
                let _ = writeln!(summary, "  best within bound: {}", describe_row(row));
            }
            None => {
                let _ = writeln!(summary, "  best within bound: none");
            }
        }
        match &knee {
            Some(row) => {
                let _ = writeln!(summary, "  knee: {}", describe_row(row));
            }
            None => {
                let _ = writeln!(summary, "  knee: none");
            }
        }
        let _ = writeln!(summary);
        comparison.push((name, best, knee));
    }

    if comparison.len() == 2 {
        let _ = writeln!(
            summary,
            "comparison (best COE at llp <= {})",
            fmt_llp_percent(config.epsilon)
        );
        for (name, best, knee) in &comparison {
            match best {
                Some(row) => {
                    let _ = writeln!(summary, "  {name}: {}", describe_row(row));
                }
                None => {
                    let _ = writeln!(summary, "  {name}: none within bound");
                }
            }
            if let Some(row) = knee {
                let _ = writeln!(summary, "  {name} knee dod: {}", fmt_f64(row.design.dod));
            }
        }
        if let (Some(a), Some(b)) = (&comparison[0].1, &comparison[1].1) {
            if a.coe.is_finite() && b.coe.is_finite() && a.coe.min(b.coe) > 0.0 {
                let rel = (a.coe - b.coe).abs() / a.coe.min(b.coe);
                let _ = writeln!(summary, "  relative COE difference: {:.4}%", rel * 100.0);
            }
        }
    }

    write_text(&config.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_dod(
    config_path: Option<&Path>,
    from: Option<f64>,
    to: Option<f64>,
    step: Option<f64>,
    epsilon: Option<f64>,
    algo: Option<AlgoChoice>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<()> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(v) = from {
        config.sweep_from = v;
    }
    if let Some(v) = to {
        config.sweep_to = v;
    }
    if let Some(v) = step {
        config.sweep_step = v;
    }
    if let Some(v) = epsilon {
        config.epsilon = v;
    }
    if let Some(v) = algo {
        config.algo = v;
    }
    if let Some(v) = seed {
        config.seed = v;
    }
    if let Some(v) = out {
        config.out = v.to_path_buf();
    }
    prepare_out_dir(&config.out)?;

    let dataset = build_dataset(&config)?;
    let problem = build_problem(&config, dataset)?;
    let dods = sweep_dods(config.sweep_from, config.sweep_to, config.sweep_step)?;

    for (algorithm, name) in selected(config.algo) {
        let rows = problem.dod_sweep(&dods, config.epsilon, algorithm, config.seed)?;
        write_text(&sweep_path(&config.out, name), &sweep_csv(&rows))?;
        println!("{name} sweep (llp bound {}):", fmt_llp_percent(config.epsilon));
        println!("  dod    n_pv   n_bes  coe          llp        feasible");
        for row in &rows {
            println!(
                "  {:<6} {:<6} {:<6} {:<12.6} {:<10} {}",
                row.dod,
                row.best_n_pv,
                row.best_n_bes,
                row.coe,
                fmt_llp_percent(row.llp),
                row.feasible
            );
        }
    }
    Ok(())
}

pub fn simulate_design(
    config_path: Option<&Path>,
    n_pv: u32,
    n_bes: u32,
    dod: f64,
    out: Option<&Path>,
) -> Result<()> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(v) = out {
        config.out = v.to_path_buf();
    }
    prepare_out_dir(&config.out)?;

    let dataset = build_dataset(&config)?;
    let design = Design64::new(n_pv, n_bes, dod);
    let result = simulate(&design, &dataset, &config.pv, &config.battery);
    let llp = compute_llp(&result);
    let life = battery_life_years(&result, &design, &config.battery);
    let breakdown = annualized_total_cost(&design, life, &config.costs);
    let coe = if result.served_energy > 0.0 {
        breakdown.atc / result.served_energy
    } else {
        f64::INFINITY
    };

    let mut trace =
        String::from("hour,ghi_w_m2,temp_c,load_kw,pv_kw,soc_kwh,deficit_kwh,dumped_kwh\n");
    for t in 0..dataset.len() {
        let pv_kw =
            pv_power(dataset.irradiance()[t], dataset.ambient_temp()[t], &config.pv, n_pv);
        let _ = writeln!(
            trace,
            "{t},{},{},{},{},{},{},{}",
            fmt_f64(dataset.irradiance()[t]),
            fmt_f64(dataset.ambient_temp()[t]),
            fmt_f64(dataset.load()[t]),
            fmt_f64(pv_kw),
            fmt_f64(result.soc[t]),
            fmt_f64(result.deficit[t]),
            fmt_f64(result.surplus_dumped[t])
        );
    }
    write_text(&config.out.join("trace.csv"), &trace)?;

    println!("design: n_pv={n_pv} n_bes={n_bes} dod={}", fmt_f64(dod));
    println!(
        "hours: {}, total load {:.1} kWh, served {:.1} kWh",
        dataset.len(),
        result.total_load,
        result.served_energy
    );
    println!("llp: {}", fmt_llp_percent(llp));
    println!("battery life: {:.2} years, replacements: {}", life, breakdown.replacements);
    println!(
        "annualized cost: {:.2}/yr (capital {:.2}, replacement {:.2}, o&m {:.2})",
        breakdown.atc, breakdown.annualized_capital, breakdown.annualized_replacement,
        breakdown.annual_om
    );
    println!("coe: {} $/kWh", fmt_f64(coe));
    println!("trace: {}", config.out.join("trace.csv").display());
    Ok(())
}

pub fn gen_data(
    config_path: Option<&Path>,
    seed: Option<u64>,
    days: Option<u32>,
    peak_load: Option<f64>,
    out: Option<&Path>,
) -> Result<()> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(v) = seed {
        config.synth.seed = v;
    }
    if let Some(v) = days {
        config.synth.days = v;
    }
    if let Some(v) = peak_load {
        config.synth.peak_load_kw = v;
    }
    if let Some(v) = out {
        config.out = v.to_path_buf();
    }
    prepare_out_dir(&config.out)?;

    let dataset = generate_synthetic(&config.synth)?;
    let mut weather = String::from("hour,ghi_w_m2,temp_c\n");
    let mut load = String::from("hour,load_kw\n");
    for t in 0..dataset.len() {
        let _ = writeln!(
            weather,
            "{t},{},{}",
            fmt_f64(dataset.irradiance()[t]),
            fmt_f64(dataset.ambient_temp()[t])
        );
        let _ = writeln!(load, "{t},{}", fmt_f64(dataset.load()[t]));
    }
    write_text(&config.out.join("weather.csv"), &weather)?;
    write_text(&config.out.join("load.csv"), &load)?;
    println!(
        "wrote {} and {} ({} hours, seed {})",
        config.out.join("weather.csv").display(),
        config.out.join("load.csv").display(),
        dataset.len(),
        config.synth.seed
    );
    Ok(())
}

pub fn brute_force(config_path: Option<&Path>, grid: &str, out: Option<&Path>) -> Result<()> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(v) = out {
        config.out = v.to_path_buf();
    }
    prepare_out_dir(&config.out)?;

    let spec = parse_grid(grid)?;
    let dataset = build_dataset(&config)?;
    let problem = build_problem(&config, dataset)?;
    let front = problem.brute_force_front(&spec)?;
    let mut rows: Vec<FrontRow> =
        front.iter().map(|(design, point)| FrontRow::new(*design, point)).collect();
    sort_front(&mut rows);
    write_text(&config.out.join("brute_front.csv"), &front_csv(&rows))?;
    println!(
        "evaluated {} designs, front size {} -> {}",
        spec.len(),
        rows.len(),
        config.out.join("brute_front.csv").display()
    );
    Ok(())
}

pub fn report(config_path: Option<&Path>, run: Option<&Path>, epsilon: Option<f64>) -> Result<()> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(v) = epsilon {
        config.epsilon = v;
    }
    let dir: PathBuf = run.map(Path::to_path_buf).unwrap_or_else(|| config.out.clone());

    let mut found = false;
    for name in ["mopso", "nsga2"] {
        let path = front_path(&dir, name);
        if !path.is_file() {
            continue;
        }
        found = true;
        let rows = read_front_csv(&path)?;
        write_text(&surface_path(&dir, name), &surface_csv(&rows))?;
        println!("{name}: {} front points", rows.len());
        match best_feasible(&rows, config.epsilon) {
            Some(row) => println!(
                "  best COE at llp <= {}: {}",
                fmt_llp_percent(config.epsilon),
                describe_row(row)
            ),
            None => println!("  no point within llp <= {}", fmt_llp_percent(config.epsilon)),
        }
        if let Some(row) = knee_of(&rows) {
            println!("  knee: {}", describe_row(row));
        }
    }
    if !found {
        return Err(CliError::Config {
            detail: format!("no front CSVs found under {}", dir.display()),
        });
    }
    Ok(())
}

/// Grid syntax: `n_pv=0..20;n_bes=0..10:2;dod=0.2..0.8:0.1` — ranges are
/// inclusive, `:step` optional for unit counts (default 1), required for
/// fractional dod ranges; bare values (`dod=0.5`) give one-element axes.
pub fn parse_grid(spec: &str) -> Result<GridSpec64> {
    let mut n_pv: Option<Vec<u32>> = None;
    let mut n_bes: Option<Vec<u32>> = None;
    let mut dod: Option<Vec<f64>> = None;
    for part in spec.split(';') {
        let part = part.trim();
        let (name, range) = part.split_once('=').ok_or_else(|| CliError::Config {
            detail: format!("grid: expected axis=range, got `{part}`"),
        })?;
        match name.trim() {
            "n_pv" => n_pv = Some(parse_count_axis(range)?),
            "n_bes" => n_bes = Some(parse_count_axis(range)?),
            "dod" => dod = Some(parse_frac_axis(range)?),
            other => {
                return Err(CliError::Config {
                    detail: format!("grid: unknown axis `{other}` (want n_pv, n_bes, dod)"),
                })
            }
        }
    }
    match (n_pv, n_bes, dod) {
        (Some(n_pv), Some(n_bes), Some(dod)) => Ok(GridSpec64 { n_pv, n_bes, dod }),
        _ => Err(CliError::Config {
            detail: "grid must define all of n_pv, n_bes, dod".to_string(),
        }),
    }
}

fn parse_count_axis(range: &str) -> Result<Vec<u32>> {
    let bad =
        || CliError::Config { detail: format!("grid: `{range}` is not a count range") };
    let (span, step) = match range.split_once(':') {
        Some((span, step)) => (span, step.parse::<u32>().map_err(|_| bad())?),
        None => (range, 1),
    };
    if step == 0 {
        return Err(bad());
    }
    match span.split_once("..") {
        Some((lo, hi)) => {
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).step_by(step as usize).collect())
        }
        None => Ok(vec![span.trim().parse().map_err(|_| bad())?]),
    }
}

fn parse_frac_axis(range: &str) -> Result<Vec<f64>> {
    let bad =
        || CliError::Config { detail: format!("grid: `{range}` is not a dod range") };
    match range.split_once("..") {
        Some((lo, rest)) => {
            let (hi, step) = rest.split_once(':').ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let step: f64 = step.trim().parse().map_err(|_| bad())?;
            sweep_dods(lo, hi, step)
        }
        None => Ok(vec![range.trim().parse().map_err(|_| bad())?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs_parse() {
        let grid = parse_grid("n_pv=0..20;n_bes=0..10:2;dod=0.2..0.8:0.1").unwrap();
        assert_eq!(grid.n_pv.len(), 21);
        assert_eq!(grid.n_bes, vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(grid.dod, vec![0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]);

        let grid = parse_grid("n_pv=5;n_bes=3;dod=0.5").unwrap();
        assert_eq!(grid.len(), 1);

        assert!(parse_grid("n_pv=0..10;dod=0.5").is_err());
        assert!(parse_grid("n_pv=ten;n_bes=3;dod=0.5").is_err());
        assert!(parse_grid("n_pv=9..3;n_bes=3;dod=0.5").is_err());
        assert!(parse_grid("n_pv=1;n_bes=3;dod=0.8..0.2:0.1").is_err());
        assert!(parse_grid("n_pv=1;n_bes=3;wind=2").is_err());
    }

    #[test]
    fn feasibility_filter_prefers_cheapest() {
        let mk = |coe: f64, llp: f64| FrontRow {
            design: Design64::new(1, 1, 0.5),
            coe,
            llp,
        };
        let rows = vec![mk(1.0, 0.2), mk(3.0, 0.0), mk(2.0, 0.01), mk(9.0, 0.0)];
        let best = best_feasible(&rows, 0.01).unwrap();
        assert_eq!(best.coe, 2.0);
        assert!(best_feasible(&rows, -1.0).is_none());
    }
}
