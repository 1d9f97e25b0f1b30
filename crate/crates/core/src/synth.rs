//! Deterministic synthetic weather and load series.
//!
//! The generator stands in for measured tropical data: a clear-sky half-sine
//! irradiance profile over a season-dependent daylight window, scaled by a
//! per-day clearness draw and bounded hourly noise; a diurnal temperature
//! sinusoid; and a double-peaked residential load shape. Hours are evaluated
//! at their centre (h + 0.5).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::num::Scalar;
use crate::system::AnnualDataset;

/// Generator settings. `Default` produces one full year at 100 kW nominal
/// peak load in a mildly seasonal tropical climate.
#[derive(Debug, Clone)]
pub struct SynthConfig<F> {
    pub seed: u64,
    pub days: u32,
    /// Nominal peak of the load shape, kW; hourly noise can exceed it by up
    /// to 10%.
    pub peak_load_kw: F,
    /// 0 = equatorial (constant day length), 1 = strong seasonal swing.
    pub latitude_factor: F,
}

impl<F: Scalar> Default for SynthConfig<F> {
    fn default() -> Self {
        Self {
            seed: 0,
            days: 365,
            peak_load_kw: F::of(100.0),
            latitude_factor: F::of(0.3),
        }
    }
}

fn day_length<F: Scalar>(day_of_year: u32, latitude_factor: F) -> F {
    let angle = F::of(std::f64::consts::TAU) * (F::of_count(day_of_year) - F::of(80.0))
        / F::of(365.0);
    F::of(12.0) + F::of(3.0) * latitude_factor * angle.sin()
}

fn seasonal_brightness<F: Scalar>(day_of_year: u32, latitude_factor: F) -> F {
    let angle = F::of(std::f64::consts::TAU) * (F::of_count(day_of_year) - F::of(80.0))
        / F::of(365.0);
    F::one() + F::of(0.1) * latitude_factor * angle.sin()
}

fn load_shape<F: Scalar>(hour_centre: F) -> F {
    let bump = |centre: f64, width: f64, height: f64| {
        let z = (hour_centre - F::of(centre)) / F::of(width);
        F::of(height) * (-(z * z)).exp()
    };
    F::of(0.3) + bump(8.0, 2.0, 0.25) + bump(19.5, 2.5, 0.7)
}

/// Builds the dataset for `config.days` days, deterministically per seed.
pub fn generate_synthetic<F: Scalar>(config: &SynthConfig<F>) -> Result<AnnualDataset<F>, CoreError> {
    if config.days == 0 {
        return Err(CoreError::InvalidParameter {
            name: "synth.days",
            reason: "0 is not >= 1".to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let hours = config.days as usize * 24;
    let mut irradiance = Vec::with_capacity(hours);
    let mut ambient = Vec::with_capacity(hours);
    let mut load = Vec::with_capacity(hours);

    let half = F::of(0.5);
    for day in 0..config.days {
        let day_of_year = day % 365;
        let daylight = day_length(day_of_year, config.latitude_factor);
        let sunrise = F::of(12.0) - daylight * half;
        let sunset = F::of(12.0) + daylight * half;
        let brightness = seasonal_brightness(day_of_year, config.latitude_factor);
        let clearness: F = rng.random_range(F::of(0.3)..F::one());

        for hour in 0..24u32 {
            let hc = F::of_count(hour) + half;
            let sky_noise: F = rng.random_range(F::of(0.85)..F::of(1.15));
            let load_noise: F = rng.random_range(F::of(0.9)..F::of(1.1));

            let ghi = if hc > sunrise && hc < sunset {
                let x = (hc - sunrise) / daylight;
                let clear_sky = F::of(1000.0) * (F::of(std::f64::consts::PI) * x).sin();
                (clear_sky * brightness * clearness * sky_noise)
                    .max(F::zero())
                    .min(F::of(1100.0))
            } else {
                F::zero()
            };
            irradiance.push(ghi);

            let season = seasonal_brightness(day_of_year, config.latitude_factor) - F::one();
            let diurnal =
                F::of(3.5) * (F::of(std::f64::consts::TAU) * (hc - F::of(8.0)) / F::of(24.0)).sin();
            ambient.push(F::of(26.5) + F::of(15.0) * season + diurnal);

            load.push(config.peak_load_kw * load_shape(hc) * load_noise);
        }
    }
    AnnualDataset::new(irradiance, ambient, load)
}
