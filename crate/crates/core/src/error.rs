//! Error type for input validation across the core crate.

use thiserror::Error;

/// Input-validation failures surfaced by the library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Hourly series passed together do not have matching lengths.
    #[error("mismatched series lengths: irradiance {irradiance}, ambient_temp {ambient_temp}, load {load}")]
    MismatchedSeries {
        irradiance: usize,
        ambient_temp: usize,
        load: usize,
    },

    /// An hourly series is empty.
    #[error("hourly series must be non-empty")]
    EmptySeries,

    /// A series value violates its sign constraint.
    #[error("{series}[{index}] = {value} violates {series} >= 0")]
    NegativeSeriesValue {
        series: &'static str,
        index: usize,
        value: f64,
    },

    /// A parameter violates its documented range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Objective vectors of different dimensions were compared.
    #[error("objective dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A hypervolume input point does not dominate the reference point.
    #[error("front point {index} does not dominate the reference point")]
    NotDominatingReference { index: usize },

    /// A brute-force grid exceeds the configured evaluation cap.
    #[error("grid of {size} points exceeds the cap of {cap}")]
    GridTooLarge { size: usize, cap: usize },
}
