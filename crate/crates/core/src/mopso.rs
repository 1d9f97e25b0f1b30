//! Multi-objective particle swarm optimization with an external archive.
//!
//! Leaders come from the archive by density-aware roulette; personal bests
//! advance only on strict dominance. All random draws happen on the
//! coordinating thread in a fixed order, so enabling parallel evaluation
//! cannot change the result for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::archive::ParetoArchive;
use crate::error::CoreError;
use crate::num::Scalar;
use crate::pareto::{dominates, ObjectivePoint};
use crate::problem::{evaluate_all, Problem};

/// Swarm configuration. `Default` gives the canonical setup: 100 particles,
/// 150 iterations, inertia fading 0.9 to 0.4, both acceleration factors 2.
#[derive(Debug, Clone)]
pub struct MopsoParams<F> {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia_start: F,
    pub inertia_end: F,
    pub c1: F,
    pub c2: F,
    pub archive_capacity: usize,
    pub mutation_rate: F,
    pub grid_divisions: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl<F: Scalar> Default for MopsoParams<F> {
    fn default() -> Self {
        Self {
            swarm_size: 100,
            iterations: 150,
            inertia_start: F::of(0.9),
            inertia_end: F::of(0.4),
            c1: F::of(2.0),
            c2: F::of(2.0),
            archive_capacity: 100,
            mutation_rate: F::of(0.1),
            grid_divisions: 7,
            seed: 0,
            parallel: true,
        }
    }
}

impl<F: Scalar> MopsoParams<F> {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.swarm_size == 0 {
            return Err(CoreError::InvalidParameter {
                name: "mopso.swarm_size",
                reason: "0 is not > 0".to_string(),
            });
        }
        if self.iterations == 0 {
            return Err(CoreError::InvalidParameter {
                name: "mopso.iterations",
                reason: "0 is not > 0".to_string(),
            });
        }
        if self.archive_capacity == 0 || self.grid_divisions == 0 {
            return Err(CoreError::InvalidParameter {
                name: "mopso.archive",
                reason: "capacity and grid divisions must be > 0".to_string(),
            });
        }
        if self.c1 < F::zero() || self.c2 < F::zero() {
            return Err(CoreError::InvalidParameter {
                name: "mopso.acceleration",
                reason: format!("c1={}, c2={} must be >= 0", self.c1, self.c2),
            });
        }
        if !(self.mutation_rate >= F::zero() && self.mutation_rate <= F::one()) {
            return Err(CoreError::InvalidParameter {
                name: "mopso.mutation_rate",
                reason: format!("{} is not in [0, 1]", self.mutation_rate),
            });
        }
        Ok(())
    }
}

/// Runs the swarm and returns the final archive of (position, objectives).
pub fn run_mopso<F: Scalar, P: Problem<F>>(
    problem: &P,
    params: &MopsoParams<F>,
) -> ParetoArchive<F, Vec<F>> {
    run_mopso_observed(problem, params, |_, _| {})
}

/// [`run_mopso`] with a per-iteration archive observer, for tests and
/// progress reporting. The observer runs after each iteration's inserts.
pub fn run_mopso_observed<F: Scalar, P: Problem<F>>(
    problem: &P,
    params: &MopsoParams<F>,
    mut observer: impl FnMut(usize, &ParetoArchive<F, Vec<F>>),
) -> ParetoArchive<F, Vec<F>> {
    if let Err(e) = params.validate() {
        panic!("{e}");
    }
    let bounds = problem.bounds();
    let dim = bounds.len();
    assert!(dim > 0, "problem has no decision variables");

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let swarm = params.swarm_size;

    let mut positions: Vec<Vec<F>> = (0..swarm)
        .map(|_| bounds.iter().map(|b| rng.random_range(b.low..=b.high)).collect())
        .collect();
    let mut velocities = vec![vec![F::zero(); dim]; swarm];

    let mut points = evaluate_all(problem, &positions, params.parallel);
    let mut pbest: Vec<(Vec<F>, ObjectivePoint<F>)> = positions
        .iter()
        .cloned()
        .zip(points.iter().cloned())
        .collect();

    let mut archive = ParetoArchive::new(params.archive_capacity, params.grid_divisions);
    for i in 0..swarm {
        archive.insert(positions[i].clone(), points[i].clone(), &mut rng);
    }

    for iter in 0..params.iterations {
        let progress = if params.iterations > 1 {
            F::of(iter as f64 / (params.iterations - 1) as f64)
        } else {
            F::zero()
        };
        let w = params.inertia_start + (params.inertia_end - params.inertia_start) * progress;

        for i in 0..swarm {
            let leader: Vec<F> = archive
                .select_leader(&mut rng)
                .map(|(pos, _)| pos.clone())
                .unwrap_or_else(|| pbest[i].0.clone());
            for d in 0..dim {
                let r1: F = rng.random_range(F::zero()..F::one());
                let r2: F = rng.random_range(F::zero()..F::one());
                let v = w * velocities[i][d]
                    + params.c1 * r1 * (pbest[i].0[d] - positions[i][d])
                    + params.c2 * r2 * (leader[d] - positions[i][d]);
                let x = positions[i][d] + v;
                if x < bounds[d].low {
                    positions[i][d] = bounds[d].low;
                    velocities[i][d] = F::zero();
                } else if x > bounds[d].high {
                    positions[i][d] = bounds[d].high;
                    velocities[i][d] = F::zero();
                } else {
                    positions[i][d] = x;
                    velocities[i][d] = v;
                }
            }
        }

        // Exploration pressure fades linearly over the run.
        let p_mut = params.mutation_rate * (F::one() - F::of(iter as f64 / params.iterations as f64));
        for position in &mut positions {
            let u: F = rng.random_range(F::zero()..F::one());
            if u < p_mut {
                let d = rng.random_range(0..dim);
                position[d] = rng.random_range(bounds[d].low..=bounds[d].high);
            }
        }

        points = evaluate_all(problem, &positions, params.parallel);

        for i in 0..swarm {
            if dominates(&points[i], &pbest[i].1) {
                pbest[i] = (positions[i].clone(), points[i].clone());
            }
        }
        for i in 0..swarm {
            archive.insert(positions[i].clone(), points[i].clone(), &mut rng);
        }
        observer(iter, &archive);
    }
    archive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{ConvexFrontBenchmark, QuadraticBowl};

    fn small_params(seed: u64) -> MopsoParams<f64> {
        MopsoParams {
            swarm_size: 30,
            iterations: 40,
            archive_capacity: 50,
            seed,
            parallel: false,
            ..MopsoParams::default()
        }
    }

    #[test]
    fn bowl_collapses_to_the_minimum() {
        let problem = QuadraticBowl::new(vec![0.5, -1.0]);
        let params = MopsoParams { seed: 42, ..MopsoParams::default() };
        let archive = run_mopso(&problem, &params);
        // With the second objective constant, dominance is total: one entry.
        assert_eq!(archive.len(), 1);
        let best = archive.entries()[0].1.values[0];
        assert!(best <= QuadraticBowl::<f64>::MINIMUM * 1.01, "best {best}");
    }

    #[test]
    fn same_seed_same_archive_even_in_parallel() {
        let problem = ConvexFrontBenchmark::new(6);
        let serial = run_mopso(&problem, &small_params(9));
        let again = run_mopso(&problem, &small_params(9));
        let parallel = run_mopso(&problem, &MopsoParams { parallel: true, ..small_params(9) });

        let key = |a: &ParetoArchive<f64, Vec<f64>>| {
            a.entries()
                .iter()
                .map(|(pos, pt)| (pos.clone(), pt.values.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&serial), key(&again));
        assert_eq!(key(&serial), key(&parallel));
    }

    #[test]
    fn archive_positions_respect_bounds() {
        let problem = ConvexFrontBenchmark::new(5);
        let archive = run_mopso(&problem, &small_params(3));
        assert!(!archive.is_empty());
        for (pos, _) in archive.entries() {
            for (x, b) in pos.iter().zip(problem.bounds()) {
                assert!(*x >= b.low && *x <= b.high);
            }
        }
    }

    #[test]
    fn archive_never_regresses_between_iterations() {
        let problem = ConvexFrontBenchmark::new(4);
        let params = MopsoParams {
            swarm_size: 20,
            iterations: 30,
            archive_capacity: 10_000,
            seed: 5,
            parallel: false,
            ..MopsoParams::default()
        };
        let mut previous: Vec<Vec<f64>> = Vec::new();
        run_mopso_observed(&problem, &params, |_, archive| {
            let current: Vec<Vec<f64>> = archive
                .entries()
                .iter()
                .map(|(_, pt)| pt.values.clone())
                .collect();
            for old in &previous {
                let covered = current.iter().any(|new| {
                    new.iter().zip(old).all(|(n, o)| n <= o)
                });
                assert!(covered, "entry {old:?} lost without a successor");
            }
            previous = current;
        });
    }

    #[test]
    fn frozen_swarm_keeps_the_initial_front() {
        let problem = ConvexFrontBenchmark::new(3);
        let frozen = |iterations| MopsoParams {
            swarm_size: 16,
            iterations,
            c1: 0.0,
            c2: 0.0,
            mutation_rate: 0.0,
            archive_capacity: 100,
            seed: 11,
            parallel: false,
            ..MopsoParams::default()
        };
        let one = run_mopso(&problem, &frozen(1));
        let many = run_mopso(&problem, &frozen(50));
        let values = |a: &ParetoArchive<f64, Vec<f64>>| {
            a.entries().iter().map(|(_, pt)| pt.values.clone()).collect::<Vec<_>>()
        };
        assert_eq!(values(&one), values(&many));
    }

    #[test]
    fn invalid_params_are_refused() {
        assert!(MopsoParams::<f64> { swarm_size: 0, ..MopsoParams::default() }
            .validate()
            .is_err());
        assert!(MopsoParams::<f64> { mutation_rate: 1.5, ..MopsoParams::default() }
            .validate()
            .is_err());
        assert!(MopsoParams::<f64> { c1: -0.1, ..MopsoParams::default() }
            .validate()
            .is_err());
    }
}
