//! Physical-system domain types and the PV output model.
//!
//! All types here are immutable value records once constructed; they can be
//! shared and sent between threads freely. [`pv_power`] is a pure function.

use crate::error::CoreError;
use crate::num::Scalar;

/// One year (or any test horizon) of aligned hourly series.
///
/// Construction validates that the three series have equal, non-zero length
/// and that irradiance and load are non-negative everywhere; the fields stay
/// private so those invariants hold for the life of the value.
#[derive(Debug, Clone)]
pub struct AnnualDataset<F> {
    irradiance: Vec<F>,
    ambient_temp: Vec<F>,
    load: Vec<F>,
}

impl<F: Scalar> AnnualDataset<F> {
    pub fn new(irradiance: Vec<F>, ambient_temp: Vec<F>, load: Vec<F>) -> Result<Self, CoreError> {
        if irradiance.len() != ambient_temp.len() || irradiance.len() != load.len() {
            return Err(CoreError::MismatchedSeries {
                irradiance: irradiance.len(),
                ambient_temp: ambient_temp.len(),
                load: load.len(),
            });
        }
        if irradiance.is_empty() {
            return Err(CoreError::EmptySeries);
        }
        for (i, &g) in irradiance.iter().enumerate() {
            if g < F::zero() || !g.is_finite() {
                return Err(CoreError::NegativeSeriesValue {
                    series: "irradiance",
                    index: i,
                    value: g.as_f64(),
                });
            }
        }
        for (i, &l) in load.iter().enumerate() {
            if l < F::zero() || !l.is_finite() {
                return Err(CoreError::NegativeSeriesValue {
                    series: "load",
                    index: i,
                    value: l.as_f64(),
                });
            }
        }
        Ok(Self {
            irradiance,
            ambient_temp,
            load,
        })
    }

    /// Number of hourly steps (8760 for a standard year).
    pub fn len(&self) -> usize {
        self.load.len()
    }

    pub fn is_empty(&self) -> bool {
        self.load.is_empty()
    }

    /// Global horizontal irradiance per hour, W/m².
    pub fn irradiance(&self) -> &[F] {
        &self.irradiance
    }

    /// Ambient temperature per hour, °C.
    pub fn ambient_temp(&self) -> &[F] {
        &self.ambient_temp
    }

    /// Demanded load per hour, kW.
    pub fn load(&self) -> &[F] {
        &self.load
    }

    /// Total demanded energy over the horizon, kWh (1 h steps).
    pub fn total_load(&self) -> F {
        self.load.iter().fold(F::zero(), |acc, &l| acc + l)
    }

    /// Largest hourly load, kW.
    pub fn peak_load(&self) -> F {
        self.load.iter().fold(F::zero(), |acc, &l| acc.max(l))
    }

    /// Mean daily demanded energy, kWh/day.
    pub fn mean_daily_load(&self) -> F {
        self.total_load() * F::of(24.0) / F::of_count(self.len() as u32)
    }
}

/// Photovoltaic module parameters for the derated linear output model.
#[derive(Debug, Clone)]
pub struct PVSpec<F> {
    /// Nameplate output of one unit at reference conditions, kW.
    pub rated_power_per_unit: F,
    /// Combined soiling/wiring/aging derating factor, in (0, 1].
    pub derating: F,
    /// Power temperature coefficient, fraction per °C (typically negative).
    pub temp_coeff: F,
    /// Nominal operating cell temperature, °C.
    pub noct: F,
    /// Reference irradiance, W/m².
    pub ref_irradiance: F,
    /// Reference cell temperature, °C.
    pub ref_cell_temp: F,
}

impl<F: Scalar> Default for PVSpec<F> {
    fn default() -> Self {
        Self {
            rated_power_per_unit: F::of(0.3),
            derating: F::of(0.9),
            temp_coeff: F::of(-0.004),
            noct: F::of(45.0),
            ref_irradiance: F::of(1000.0),
            ref_cell_temp: F::of(25.0),
        }
    }
}

/// Validation guard: finite and strictly positive, so NaN and infinities fail.
fn positive_finite<F: Scalar>(x: F) -> bool {
    x.is_finite() && x > F::zero()
}

/// Validation guard: finite fraction in (0, 1].
fn unit_fraction<F: Scalar>(x: F) -> bool {
    x.is_finite() && x > F::zero() && x <= F::one()
}

/// Validation guard: finite and zero or more.
fn nonnegative_finite<F: Scalar>(x: F) -> bool {
    x.is_finite() && x >= F::zero()
}

impl<F: Scalar> PVSpec<F> {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !positive_finite(self.rated_power_per_unit) {
            return Err(CoreError::InvalidParameter {
                name: "pv.rated_power_per_unit",
                reason: format!("{} is not a positive finite number", self.rated_power_per_unit),
            });
        }
        if !unit_fraction(self.derating) {
            return Err(CoreError::InvalidParameter {
                name: "pv.derating",
                reason: format!("{} is not in (0, 1]", self.derating),
            });
        }
        if !positive_finite(self.ref_irradiance) {
            return Err(CoreError::InvalidParameter {
                name: "pv.ref_irradiance",
                reason: format!("{} is not a positive finite number", self.ref_irradiance),
            });
        }
        Ok(())
    }
}

/// Battery bank parameters, per storage unit.
#[derive(Debug, Clone)]
pub struct BatterySpec<F> {
    /// Nominal capacity of one unit, kWh.
    pub capacity_per_unit: F,
    /// Charge efficiency, fraction in (0, 1], applied on energy entering storage.
    pub charge_eff: F,
    /// Discharge efficiency, fraction in (0, 1], applied on energy leaving storage.
    pub discharge_eff: F,
    /// Maximum charging power per unit, kW.
    pub max_charge_rate: F,
    /// Maximum discharging power per unit, kW.
    pub max_discharge_rate: F,
    /// Calendar (float) life, years.
    pub float_life: F,
    /// Cycle life at 100% depth of discharge (power-law coefficient).
    pub cycle_life_a: F,
    /// Power-law exponent of cycle life vs depth of discharge.
    pub cycle_life_b: F,
}

impl<F: Scalar> Default for BatterySpec<F> {
    fn default() -> Self {
        Self {
            capacity_per_unit: F::of(2.4),
            charge_eff: F::of(0.9),
            discharge_eff: F::of(0.9),
            max_charge_rate: F::of(0.6),
            max_discharge_rate: F::of(0.6),
            float_life: F::of(10.0),
            cycle_life_a: F::of(1200.0),
            cycle_life_b: F::of(2.0),
        }
    }
}

impl<F: Scalar> BatterySpec<F> {
    pub fn validate(&self) -> Result<(), CoreError> {
        for (name, value) in [
            ("battery.capacity_per_unit", self.capacity_per_unit),
            ("battery.max_charge_rate", self.max_charge_rate),
            ("battery.max_discharge_rate", self.max_discharge_rate),
            ("battery.float_life", self.float_life),
            ("battery.cycle_life_a", self.cycle_life_a),
        ] {
            if !positive_finite(value) {
                return Err(CoreError::InvalidParameter {
                    name,
                    reason: format!("{value} is not a positive finite number"),
                });
            }
        }
        for (name, eff) in [
            ("battery.charge_eff", self.charge_eff),
            ("battery.discharge_eff", self.discharge_eff),
        ] {
            if !unit_fraction(eff) {
                return Err(CoreError::InvalidParameter {
                    name,
                    reason: format!("{eff} is not in (0, 1]"),
                });
            }
        }
        if !nonnegative_finite(self.cycle_life_b) {
            return Err(CoreError::InvalidParameter {
                name: "battery.cycle_life_b",
                reason: format!("{} is not a nonnegative finite number", self.cycle_life_b),
            });
        }
        Ok(())
    }
}

/// A candidate system design: unit counts plus the permitted depth of discharge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design<F> {
    /// Number of PV units installed.
    pub n_pv: u32,
    /// Number of battery units installed.
    pub n_bes: u32,
    /// Depth of discharge, fraction of capacity allowed to be withdrawn.
    pub dod: F,
}

impl<F: Scalar> Design<F> {
    pub fn new(n_pv: u32, n_bes: u32, dod: F) -> Self {
        Self { n_pv, n_bes, dod }
    }
}

/// Cost model inputs for the annualized total cost.
#[derive(Debug, Clone)]
pub struct CostParams<F> {
    /// Installed cost of one PV unit, USD.
    pub pv_unit_cost: F,
    /// Installed cost of one battery unit, USD.
    pub bes_unit_cost: F,
    /// Fixed converter/balance-of-system cost, USD.
    pub converter_cost: F,
    /// Annual O&M as a fraction of capital cost, per year.
    pub om_frac: F,
    /// Discount rate, fraction per year.
    pub discount_rate: F,
    /// Project planning horizon, years.
    pub project_life: u32,
    /// Cost of replacing one battery unit, USD.
    pub bes_replacement_cost: F,
}

impl<F: Scalar> Default for CostParams<F> {
    fn default() -> Self {
        Self {
            pv_unit_cost: F::of(210.0),
            bes_unit_cost: F::of(360.0),
            converter_cost: F::of(20_000.0),
            om_frac: F::of(0.01),
            discount_rate: F::of(0.06),
            project_life: 20,
            bes_replacement_cost: F::of(300.0),
        }
    }
}

impl<F: Scalar> CostParams<F> {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.project_life == 0 {
            return Err(CoreError::InvalidParameter {
                name: "costs.project_life",
                reason: "0 is not > 0".to_string(),
            });
        }
        for (name, value) in [
            ("costs.discount_rate", self.discount_rate),
            ("costs.pv_unit_cost", self.pv_unit_cost),
            ("costs.bes_unit_cost", self.bes_unit_cost),
            ("costs.converter_cost", self.converter_cost),
            ("costs.om_frac", self.om_frac),
            ("costs.bes_replacement_cost", self.bes_replacement_cost),
        ] {
            if !nonnegative_finite(value) {
                return Err(CoreError::InvalidParameter {
                    name,
                    reason: format!("{value} is not a nonnegative finite number"),
                });
            }
        }
        Ok(())
    }
}

/// Array output for one hour, kW.
///
/// Linear-in-irradiance derated model with NOCT cell-temperature correction:
/// the cell runs at `ambient + G * (NOCT - 20) / 800` and output scales as
/// `n_pv * rated * derating * (G / G_ref) * (1 + temp_coeff * (T_cell - T_ref))`,
/// clamped at zero.
pub fn pv_power<F: Scalar>(irradiance: F, ambient_temp: F, spec: &PVSpec<F>, n_pv: u32) -> F {
    debug_assert!(irradiance >= F::zero());
    let cell_temp = ambient_temp + irradiance * (spec.noct - F::of(20.0)) / F::of(800.0);
    let temp_factor = F::one() + spec.temp_coeff * (cell_temp - spec.ref_cell_temp);
    let power = F::of_count(n_pv)
        * spec.rated_power_per_unit
        * spec.derating
        * (irradiance / spec.ref_irradiance)
        * temp_factor;
    power.max(F::zero())
}
