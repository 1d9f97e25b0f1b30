//! Sizing toolkit for standalone solar-PV/battery systems.
//!
//! The crate simulates a candidate design (PV unit count, battery unit count,
//! permitted depth of discharge) against hourly irradiance, temperature, and
//! load series, prices it over a project horizon, and searches the design
//! space for the cost/reliability trade-off front. Two independent
//! metaheuristics (a particle swarm with an adaptive-grid archive and an
//! elitist genetic algorithm) cross-check each other, and a brute-force grid
//! enumerator serves as ground truth on small instances.
//!
//! All numeric code is generic over the scalar type through [`Scalar`];
//! `f64` aliases for the main domain types live at the crate root.

pub mod archive;
pub mod benchmarks;
pub mod econ;
pub mod error;
pub mod mopso;
pub mod nsga2;
pub mod num;
pub mod pareto;
pub mod problem;
pub mod simulate;
pub mod sizing;
pub mod synth;
pub mod system;

pub use error::CoreError;
pub use num::Scalar;

/// [`system::AnnualDataset`] over `f64`.
pub type AnnualDataset64 = system::AnnualDataset<f64>;
/// [`system::PVSpec`] over `f64`.
pub type PVSpec64 = system::PVSpec<f64>;
/// [`system::BatterySpec`] over `f64`.
pub type BatterySpec64 = system::BatterySpec<f64>;
/// [`system::Design`] over `f64`.
pub type Design64 = system::Design<f64>;
/// [`system::CostParams`] over `f64`.
pub type CostParams64 = system::CostParams<f64>;
/// [`simulate::SimulationResult`] over `f64`.
pub type SimulationResult64 = simulate::SimulationResult<f64>;
/// [`econ::CostBreakdown`] over `f64`.
pub type CostBreakdown64 = econ::CostBreakdown<f64>;
/// [`pareto::ObjectivePoint`] over `f64`.
pub type ObjectivePoint64 = pareto::ObjectivePoint<f64>;
/// [`mopso::MopsoParams`] over `f64`.
pub type MopsoParams64 = mopso::MopsoParams<f64>;
/// [`nsga2::Nsga2Params`] over `f64`.
pub type Nsga2Params64 = nsga2::Nsga2Params<f64>;
/// [`synth::SynthConfig`] over `f64`.
pub type SynthConfig64 = synth::SynthConfig<f64>;
/// [`sizing::SizingProblem`] over `f64`.
pub type SizingProblem64 = sizing::SizingProblem<f64>;
/// [`sizing::SweepRow`] over `f64`.
pub type SweepRow64 = sizing::SweepRow<f64>;
/// [`sizing::GridSpec`] over `f64`.
pub type GridSpec64 = sizing::GridSpec<f64>;
