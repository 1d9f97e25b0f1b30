//! Run configuration: defaults, overridden by a flat key-value file,
//! overridden by `SUNSIZER_*` environment variables, overridden by CLI flags.
//!
//! Keys use dotted section prefixes (`battery.capacity_per_unit=1.2`).
//! Unknown keys are hard errors, in files and in the environment alike; a
//! typo that silently reverts to a default is worse than a refusal to run.

use std::path::{Path, PathBuf};

use sunsizer_core::sizing::CoeDenominator;
use sunsizer_core::{
    BatterySpec64, CostParams64, MopsoParams64, Nsga2Params64, PVSpec64, SynthConfig64,
};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgoChoice {
    Mopso,
    Nsga2,
    Both,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub weather: Option<PathBuf>,
    pub load: Option<PathBuf>,
    pub synth: SynthConfig64,
    pub pv: PVSpec64,
    pub battery: BatterySpec64,
    pub costs: CostParams64,
    pub n_pv_max: Option<f64>,
    pub n_bes_max: Option<f64>,
    pub dod_min: Option<f64>,
    pub dod_max: Option<f64>,
    pub algo: AlgoChoice,
    pub seed: u64,
    pub epsilon: f64,
    pub out: PathBuf,
    pub parallel: bool,
    pub denominator: CoeDenominator,
    pub sweep_from: f64,
    pub sweep_to: f64,
    pub sweep_step: f64,
    pub mopso: MopsoParams64,
    pub nsga2: Nsga2Params64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            weather: None,
            load: None,
            synth: SynthConfig64::default(),
            pv: PVSpec64::default(),
            battery: BatterySpec64::default(),
            costs: CostParams64::default(),
            n_pv_max: None,
            n_bes_max: None,
            dod_min: None,
            dod_max: None,
            algo: AlgoChoice::Both,
            seed: 0,
            epsilon: 0.0,
            out: PathBuf::from("out"),
            parallel: true,
            denominator: CoeDenominator::ServedEnergy,
            sweep_from: 0.2,
            sweep_to: 0.8,
            sweep_step: 0.1,
            mopso: MopsoParams64::default(),
            nsga2: Nsga2Params64::default(),
        }
    }
}

pub const KNOWN_KEYS: &[&str] = &[
    "data.weather",
    "data.load",
    "synth.seed",
    "synth.days",
    "synth.peak_load_kw",
    "synth.latitude_factor",
    "pv.rated_power_per_unit",
    "pv.derating",
    "pv.temp_coeff",
    "pv.noct",
    "pv.ref_irradiance",
    "pv.ref_cell_temp",
    "battery.capacity_per_unit",
    "battery.charge_eff",
    "battery.discharge_eff",
    "battery.max_charge_rate",
    "battery.max_discharge_rate",
    "battery.float_life",
    "battery.cycle_life_a",
    "battery.cycle_life_b",
    "costs.pv_unit_cost",
    "costs.bes_unit_cost",
    "costs.converter_cost",
    "costs.om_frac",
    "costs.discount_rate",
    "costs.project_life",
    "costs.bes_replacement_cost",
    "bounds.n_pv_max",
    "bounds.n_bes_max",
    "bounds.dod_min",
    "bounds.dod_max",
    "run.algo",
    "run.seed",
    "run.epsilon",
    "run.out",
    "run.parallel",
    "coe.denominator",
    "sweep.from",
    "sweep.to",
    "sweep.step",
    "mopso.swarm_size",
    "mopso.iterations",
    "mopso.inertia_start",
    "mopso.inertia_end",
    "mopso.c1",
    "mopso.c2",
    "mopso.archive_capacity",
    "mopso.mutation_rate",
    "mopso.grid_divisions",
    "nsga2.population",
    "nsga2.generations",
    "nsga2.crossover_prob",
    "nsga2.crossover_eta",
    "nsga2.mutation_prob",
    "nsga2.mutation_eta",
];

pub fn env_name(key: &str) -> String {
    format!("SUNSIZER_{}", key.replace('.', "_").to_uppercase())
}

impl RunConfig {
    /// Defaults, then the file at `path` (if given), then the environment.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut config = Self::default();
        if let Some(path) = path {
            config.apply_file(path)?;
        }
        config.apply_env()?;
        config.check_files()?;
        Ok(config)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
                detail: format!("{}:{}: expected key=value, got `{line}`", path.display(), lineno + 1),
            })?;
            self.apply(key.trim(), value.trim()).map_err(|e| match e {
                CliError::Config { detail } => CliError::Config {
                    detail: format!("{}:{}: {detail}", path.display(), lineno + 1),
                },
                other => other,
            })?;
        }
        Ok(())
    }

    fn apply_env(&mut self) -> Result<()> {
        // Sorted so application order never depends on environment iteration.
        let mut pairs: Vec<(String, String)> = std::env::vars()
            .filter(|(name, _)| name.starts_with("SUNSIZER_"))
            .collect();
        pairs.sort();
        for (name, value) in pairs {
            let key = KNOWN_KEYS.iter().find(|key| env_name(key) == name);
            match key {
                Some(key) => self.apply(key, &value)?,
                None => {
                    return Err(CliError::Config {
                        detail: format!("unknown config key via environment: {name}"),
                    })
                }
            }
        }
        Ok(())
    }

    fn check_files(&self) -> Result<()> {
        match (&self.weather, &self.load) {
            (Some(_), None) | (None, Some(_)) => {
                return Err(CliError::Config {
                    detail: "data.weather and data.load must be set together".to_string(),
                })
            }
            _ => {}
        }
        for (key, path) in [("data.weather", &self.weather), ("data.load", &self.load)] {
            if let Some(path) = path {
                if !path.is_file() {
                    return Err(CliError::Config {
                        detail: format!("{key}: file not found: {}", path.display()),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "data.weather" => self.weather = Some(PathBuf::from(value)),
            "data.load" => self.load = Some(PathBuf::from(value)),
            "synth.seed" => self.synth.seed = p_u64(key, value)?,
            "synth.days" => self.synth.days = p_u32(key, value)?,
            "synth.peak_load_kw" => self.synth.peak_load_kw = p_f64(key, value)?,
            "synth.latitude_factor" => self.synth.latitude_factor = p_f64(key, value)?,
            "pv.rated_power_per_unit" => self.pv.rated_power_per_unit = p_f64(key, value)?,
            "pv.derating" => self.pv.derating = p_f64(key, value)?,
            "pv.temp_coeff" => self.pv.temp_coeff = p_f64(key, value)?,
            "pv.noct" => self.pv.noct = p_f64(key, value)?,
            "pv.ref_irradiance" => self.pv.ref_irradiance = p_f64(key, value)?,
            "pv.ref_cell_temp" => self.pv.ref_cell_temp = p_f64(key, value)?,
            "battery.capacity_per_unit" => self.battery.capacity_per_unit = p_f64(key, value)?,
            "battery.charge_eff" => self.battery.charge_eff = p_f64(key, value)?,
            "battery.discharge_eff" => self.battery.discharge_eff = p_f64(key, value)?,
            "battery.max_charge_rate" => self.battery.max_charge_rate = p_f64(key, value)?,
            "battery.max_discharge_rate" => self.battery.max_discharge_rate = p_f64(key, value)?,
            "battery.float_life" => self.battery.float_life = p_f64(key, value)?,
            "battery.cycle_life_a" => self.battery.cycle_life_a = p_f64(key, value)?,
            "battery.cycle_life_b" => self.battery.cycle_life_b = p_f64(key, value)?,
            "costs.pv_unit_cost" => self.costs.pv_unit_cost = p_f64(key, value)?,
            "costs.bes_unit_cost" => self.costs.bes_unit_cost = p_f64(key, value)?,
            "costs.converter_cost" => self.costs.converter_cost = p_f64(key, value)?,
            "costs.om_frac" => self.costs.om_frac = p_f64(key, value)?,
            "costs.discount_rate" => self.costs.discount_rate = p_f64(key, value)?,
            "costs.project_life" => self.costs.project_life = p_u32(key, value)?,
            "costs.bes_replacement_cost" => self.costs.bes_replacement_cost = p_f64(key, value)?,
            "bounds.n_pv_max" => self.n_pv_max = Some(p_f64(key, value)?),
            "bounds.n_bes_max" => self.n_bes_max = Some(p_f64(key, value)?),
            "bounds.dod_min" => self.dod_min = Some(p_f64(key, value)?),
            "bounds.dod_max" => self.dod_max = Some(p_f64(key, value)?),
            "run.algo" => self.algo = p_algo(key, value)?,
            "run.seed" => self.seed = p_u64(key, value)?,
            "run.epsilon" => self.epsilon = p_f64(key, value)?,
            "run.out" => self.out = PathBuf::from(value),
            "run.parallel" => self.parallel = p_bool(key, value)?,
            "coe.denominator" => self.denominator = p_denominator(key, value)?,
            "sweep.from" => self.sweep_from = p_f64(key, value)?,
            "sweep.to" => self.sweep_to = p_f64(key, value)?,
            "sweep.step" => self.sweep_step = p_f64(key, value)?,
            "mopso.swarm_size" => self.mopso.swarm_size = p_usize(key, value)?,
            "mopso.iterations" => self.mopso.iterations = p_usize(key, value)?,
            "mopso.inertia_start" => self.mopso.inertia_start = p_f64(key, value)?,
            "mopso.inertia_end" => self.mopso.inertia_end = p_f64(key, value)?,
            "mopso.c1" => self.mopso.c1 = p_f64(key, value)?,
            "mopso.c2" => self.mopso.c2 = p_f64(key, value)?,
            "mopso.archive_capacity" => self.mopso.archive_capacity = p_usize(key, value)?,
            "mopso.mutation_rate" => self.mopso.mutation_rate = p_f64(key, value)?,
            "mopso.grid_divisions" => self.mopso.grid_divisions = p_usize(key, value)?,
            "nsga2.population" => self.nsga2.population = p_usize(key, value)?,
            "nsga2.generations" => self.nsga2.generations = p_usize(key, value)?,
            "nsga2.crossover_prob" => self.nsga2.crossover_prob = p_f64(key, value)?,
            "nsga2.crossover_eta" => self.nsga2.crossover_eta = p_f64(key, value)?,
            "nsga2.mutation_prob" => self.nsga2.mutation_prob = Some(p_f64(key, value)?),
            "nsga2.mutation_eta" => self.nsga2.mutation_eta = p_f64(key, value)?,
            _ => {
                return Err(CliError::Config { detail: format!("unknown config key `{key}`") });
            }
        }
        Ok(())
    }

    /// MOPSO parameters with the run-level seed and parallelism applied.
    pub fn mopso_params(&self) -> MopsoParams64 {
        MopsoParams64 { seed: self.seed, parallel: self.parallel, ..self.mopso.clone() }
    }

    /// NSGA-II parameters with the run-level seed and parallelism applied.
    pub fn nsga2_params(&self) -> Nsga2Params64 {
        Nsga2Params64 { seed: self.seed, parallel: self.parallel, ..self.nsga2.clone() }
    }
}

/// Inclusive arithmetic progression of DOD values, each rounded to 1e-10 so
/// accumulated float error never leaks into keys or output.
pub fn sweep_dods(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && from > 0.0 && from <= to) {
        return Err(CliError::Config {
            detail: format!("invalid sweep range {from}..{to} step {step}"),
        });
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| ((from + k as f64 * step) * 1e10).round() / 1e10).collect())
}

fn p_f64(key: &str, value: &str) -> Result<f64> {
    value.parse().map_err(|_| bad(key, value, "a number"))
}

fn p_u32(key: &str, value: &str) -> Result<u32> {
    value.parse().map_err(|_| bad(key, value, "a nonnegative integer"))
}

fn p_u64(key: &str, value: &str) -> Result<u64> {
    value.parse().map_err(|_| bad(key, value, "a nonnegative integer"))
}

fn p_usize(key: &str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| bad(key, value, "a nonnegative integer"))
}

fn p_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, value, "true or false")),
    }
}

fn p_algo(key: &str, value: &str) -> Result<AlgoChoice> {
    match value {
        "mopso" => Ok(AlgoChoice::Mopso),
        "nsga2" => Ok(AlgoChoice::Nsga2),
        "both" => Ok(AlgoChoice::Both),
        _ => Err(bad(key, value, "mopso, nsga2, or both")),
    }
}

fn p_denominator(key: &str, value: &str) -> Result<CoeDenominator> {
    match value {
        "served" => Ok(CoeDenominator::ServedEnergy),
        "total_load" => Ok(CoeDenominator::TotalLoad),
        _ => Err(bad(key, value, "served or total_load")),
    }
}

fn bad(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Config { detail: format!("{key}: `{value}` is not {expected}") }
}
