//! Lifecycle economics: annualized total cost, DOD-dependent battery life,
//! and cost of energy.
//!
//! Replacement outlays are discounted to present value at their install year
//! and then annualized over the project horizon with the same capital
//! recovery factor as the initial investment.

use crate::error::CoreError;
use crate::num::Scalar;
use crate::simulate::SimulationResult;
use crate::system::{BatterySpec, CostParams, Design};

/// Annualized cost components for one design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown<F> {
    /// Initial capital annualized over the project life, USD/yr.
    pub annualized_capital: F,
    /// Battery replacement outlays annualized the same way, USD/yr.
    pub annualized_replacement: F,
    /// Operation and maintenance, USD/yr.
    pub annual_om: F,
    /// Sum of the three components, USD/yr.
    pub atc: F,
    /// Battery life used for the replacement schedule, years.
    pub battery_life: F,
    /// Number of battery replacements within the project horizon.
    pub replacements: u32,
}

/// Capital recovery factor `i(1+i)^n / ((1+i)^n - 1)`, or `1/n` at zero interest.
pub fn crf<F: Scalar>(discount_rate: F, years: u32) -> F {
    debug_assert!(years > 0);
    debug_assert!(discount_rate >= F::zero());
    if discount_rate == F::zero() {
        return F::one() / F::of_count(years);
    }
    let growth = (F::one() + discount_rate).powi(years as i32);
    discount_rate * growth / (growth - F::one())
}

/// Cycles to failure at a fixed depth of discharge: `a * dod^(-b)`.
pub fn battery_cycle_life<F: Scalar>(dod: F, spec: &BatterySpec<F>) -> Result<F, CoreError> {
    if !(dod > F::zero() && dod <= F::one()) {
        return Err(CoreError::InvalidParameter {
            name: "dod",
            reason: format!("{dod} is not in (0, 1]"),
        });
    }
    Ok(spec.cycle_life_a * dod.powf(-spec.cycle_life_b))
}

/// Battery life in years: the calendar limit or the cycling limit, whichever
/// comes first.
///
/// A year of operation consumes `throughput / (n_bes * capacity * dod)` full
/// cycles; zero cycling (or no battery at all) leaves the calendar limit.
pub fn battery_life_years<F: Scalar>(
    result: &SimulationResult<F>,
    design: &Design<F>,
    spec: &BatterySpec<F>,
) -> F {
    if design.n_bes == 0 || result.discharge_throughput == F::zero() {
        return spec.float_life;
    }
    let usable = F::of_count(design.n_bes) * spec.capacity_per_unit * design.dod;
    let cycles_per_year = result.discharge_throughput / usable;
    let cycle_life = battery_cycle_life(design.dod, spec)
        .expect("cycling throughput implies a positive dod");
    spec.float_life.min(cycle_life / cycles_per_year)
}

/// Annualizes capital, scheduled battery replacements, and O&M.
///
/// Replacements happen every `battery_life` years; the last scheduled at or
/// beyond the horizon end is dropped (`ceil(project_life / life) - 1`).
pub fn annualized_total_cost<F: Scalar>(
    design: &Design<F>,
    battery_life: F,
    costs: &CostParams<F>,
) -> CostBreakdown<F> {
    debug_assert!(battery_life > F::zero());
    let capital = F::of_count(design.n_pv) * costs.pv_unit_cost
        + F::of_count(design.n_bes) * costs.bes_unit_cost
        + costs.converter_cost;

    let horizon = F::of_count(costs.project_life);
    let replacements = ((horizon / battery_life).ceil().as_f64() as u32).saturating_sub(1);

    // Geometric sum of q^j for j in 1..=r with q the per-life discount step.
    let i = costs.discount_rate;
    let pv_replacement = if replacements == 0 {
        F::zero()
    } else {
        let unit = F::of_count(design.n_bes) * costs.bes_replacement_cost;
        let sum = if i == F::zero() {
            F::of_count(replacements)
        } else {
            let q = (F::one() + i).powf(-battery_life);
            q * (F::one() - q.powi(replacements as i32)) / (F::one() - q)
        };
        unit * sum
    };

    let annualize = crf(i, costs.project_life);
    let annualized_capital = capital * annualize;
    let annualized_replacement = pv_replacement * annualize;
    let annual_om = costs.om_frac * capital;
    CostBreakdown {
        annualized_capital,
        annualized_replacement,
        annual_om,
        atc: annualized_capital + annualized_replacement + annual_om,
        battery_life,
        replacements,
    }
}

/// Cost of energy: annualized cost per delivered kilowatt-hour.
///
/// Zero energy yields the penalty sentinel (positive infinity) instead of a
/// division by zero; negative energy is rejected.
pub fn compute_coe<F: Scalar>(atc: F, energy: F) -> Result<F, CoreError> {
    compute_coe_or(atc, energy, F::infinity())
}

/// [`compute_coe`] with a caller-chosen penalty for the zero-energy case.
pub fn compute_coe_or<F: Scalar>(atc: F, energy: F, penalty: F) -> Result<F, CoreError> {
    if energy < F::zero() {
        return Err(CoreError::InvalidParameter {
            name: "energy",
            reason: format!("{energy} is not >= 0"),
        });
    }
    if energy == F::zero() {
        return Ok(penalty);
    }
    Ok(atc / energy)
}
