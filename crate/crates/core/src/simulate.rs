//! Chronological energy-balance simulation over hourly series.
//!
//! Dispatch is load-following: PV serves the load directly, surplus charges
//! the battery, remaining demand discharges it, and whatever is still unmet
//! is recorded as deficit. One step spans one hour, so kW and kWh coincide.

use crate::num::Scalar;
use crate::system::{pv_power, AnnualDataset, BatterySpec, Design, PVSpec};

/// Outcome of one simulated horizon.
#[derive(Debug, Clone)]
pub struct SimulationResult<F> {
    /// State of charge at the end of each hour, kWh.
    pub soc: Vec<F>,
    /// Unmet demand per hour, kWh.
    pub deficit: Vec<F>,
    /// PV energy discarded per hour once the battery is full or rate-capped, kWh.
    pub surplus_dumped: Vec<F>,
    /// Total energy withdrawn from storage over the horizon, kWh.
    pub discharge_throughput: F,
    /// Total energy delivered to the load, kWh.
    pub served_energy: F,
    /// Total energy demanded, kWh.
    pub total_load: F,
    /// Lower SOC bound implied by the design, kWh.
    pub soc_min: F,
    /// Upper SOC bound (installed usable capacity), kWh.
    pub soc_max: F,
}

/// Runs the hourly dispatch over the whole dataset.
///
/// The battery starts full. `soc_max = n_bes * capacity_per_unit` and
/// `soc_min = (1 - dod) * soc_max`; with `n_bes = 0` both are zero and the
/// battery is inert. Charging stores `min(surplus * charge_eff, headroom,
/// n_bes * max_charge_rate)`; discharging delivers `min(need,
/// available * discharge_eff, n_bes * max_discharge_rate)`.
pub fn simulate<F: Scalar>(
    design: &Design<F>,
    dataset: &AnnualDataset<F>,
    pv: &PVSpec<F>,
    bat: &BatterySpec<F>,
) -> SimulationResult<F> {
    let n_bes = F::of_count(design.n_bes);
    let soc_max = n_bes * bat.capacity_per_unit;
    let soc_min = (F::one() - design.dod) * soc_max;
    let charge_cap = n_bes * bat.max_charge_rate;
    let discharge_cap = n_bes * bat.max_discharge_rate;

    let steps = dataset.len();
    let mut soc_series = Vec::with_capacity(steps);
    let mut deficit = Vec::with_capacity(steps);
    let mut surplus_dumped = Vec::with_capacity(steps);

    let mut soc = soc_max;
    let mut deficit_total = F::zero();
    let mut total_load = F::zero();
    let mut throughput = F::zero();

    for t in 0..steps {
        let p_pv = pv_power(dataset.irradiance()[t], dataset.ambient_temp()[t], pv, design.n_pv);
        let load = dataset.load()[t];
        total_load += load;
        let net = p_pv - load;

        if net >= F::zero() {
            let charge = (net * bat.charge_eff).min(soc_max - soc).min(charge_cap);
            // The max/min guards pin the SOC invariant against one-ulp
            // rounding in the efficiency division and the sum.
            soc = (soc + charge).min(soc_max);
            deficit.push(F::zero());
            surplus_dumped.push((net - charge / bat.charge_eff).max(F::zero()));
        } else {
            let need = -net;
            let available = (soc - soc_min) * bat.discharge_eff;
            let delivered = need.min(available).min(discharge_cap);
            let withdrawn = delivered / bat.discharge_eff;
            soc = (soc - withdrawn).max(soc_min);
            throughput += withdrawn;
            let unmet = need - delivered;
            deficit_total += unmet;
            deficit.push(unmet);
            surplus_dumped.push(F::zero());
        }
        soc_series.push(soc);
    }

    SimulationResult {
        soc: soc_series,
        deficit,
        surplus_dumped,
        discharge_throughput: throughput,
        served_energy: total_load - deficit_total,
        total_load,
        soc_min,
        soc_max,
    }
}

/// Loss of load probability: unmet energy as a fraction of demanded energy.
///
/// Returns 0 when nothing was demanded. Always in [0, 1].
pub fn compute_llp<F: Scalar>(result: &SimulationResult<F>) -> F {
    if result.total_load == F::zero() {
        return F::zero();
    }
    let unmet = result.deficit.iter().fold(F::zero(), |acc, &d| acc + d);
    unmet / result.total_load
}
