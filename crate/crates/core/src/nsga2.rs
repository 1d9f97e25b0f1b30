//! Elitist non-dominated-sorting genetic algorithm.
//!
//! Binary tournaments on (rank, crowding) pick parents; simulated binary
//! crossover and polynomial mutation produce offspring; parents and
//! offspring merge and the best N survive front by front, with crowding
//! truncation on the split front. Random draws are sequential on the
//! coordinator, so parallel evaluation never changes a seeded run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::num::Scalar;
use crate::pareto::{crowding_distance, non_dominated_sort, ObjectivePoint};
use crate::problem::{evaluate_all, Problem, VarBound};

/// Run configuration. `Default` gives population 100 for 150 generations
/// with crossover probability 0.9 (eta 15) and per-gene mutation
/// probability `1/dimension` (eta 20).
#[derive(Debug, Clone)]
pub struct Nsga2Params<F> {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: F,
    pub crossover_eta: F,
    /// Per-gene mutation probability; `None` resolves to `1/dimension`.
    pub mutation_prob: Option<F>,
    pub mutation_eta: F,
    pub seed: u64,
    pub parallel: bool,
}

impl<F: Scalar> Default for Nsga2Params<F> {
    fn default() -> Self {
        Self {
            population: 100,
            generations: 150,
            crossover_prob: F::of(0.9),
            crossover_eta: F::of(15.0),
            mutation_prob: None,
            mutation_eta: F::of(20.0),
            seed: 0,
            parallel: true,
        }
    }
}

impl<F: Scalar> Nsga2Params<F> {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.population == 0 || !self.population.is_multiple_of(2) {
            return Err(CoreError::InvalidParameter {
                name: "nsga2.population",
                reason: format!("{} is not a positive even count", self.population),
            });
        }
        if self.generations == 0 {
            return Err(CoreError::InvalidParameter {
                name: "nsga2.generations",
                reason: "0 is not > 0".to_string(),
            });
        }
        if !(self.crossover_prob >= F::zero() && self.crossover_prob <= F::one()) {
            return Err(CoreError::InvalidParameter {
                name: "nsga2.crossover_prob",
                reason: format!("{} is not in [0, 1]", self.crossover_prob),
            });
        }
        if let Some(p) = self.mutation_prob {
            if !(p >= F::zero() && p <= F::one()) {
                return Err(CoreError::InvalidParameter {
                    name: "nsga2.mutation_prob",
                    reason: format!("{p} is not in [0, 1]"),
                });
            }
        }
        if self.crossover_eta <= F::zero() || self.mutation_eta <= F::zero() {
            return Err(CoreError::InvalidParameter {
                name: "nsga2.eta",
                reason: "distribution indices must be > 0".to_string(),
            });
        }
        Ok(())
    }
}

/// Runs the search and returns the final population's first front as
/// (position, objectives) pairs.
pub fn run_nsga2<F: Scalar, P: Problem<F>>(
    problem: &P,
    params: &Nsga2Params<F>,
) -> Vec<(Vec<F>, ObjectivePoint<F>)> {
    run_nsga2_observed(problem, params, |_, _| {})
}

/// [`run_nsga2`] with a per-generation observer over the surviving
/// population's objectives, for tests and progress reporting.
pub fn run_nsga2_observed<F: Scalar, P: Problem<F>>(
    problem: &P,
    params: &Nsga2Params<F>,
    mut observer: impl FnMut(usize, &[ObjectivePoint<F>]),
) -> Vec<(Vec<F>, ObjectivePoint<F>)> {
    if let Err(e) = params.validate() {
        panic!("{e}");
    }
    let bounds = problem.bounds();
    let dim = bounds.len();
    assert!(dim > 0, "problem has no decision variables");

    let n = params.population;
    let mutation_prob = params
        .mutation_prob
        .unwrap_or_else(|| F::one() / F::of_count(dim as u32));

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut positions: Vec<Vec<F>> = (0..n)
        .map(|_| bounds.iter().map(|b| rng.random_range(b.low..=b.high)).collect())
        .collect();
    let mut points = evaluate_all(problem, &positions, params.parallel);

    for generation in 0..params.generations {
        let fronts = non_dominated_sort(&points);
        let (ranks, crowding) = rank_and_crowd(&fronts, &points);

        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let a = tournament(&ranks, &crowding, n, &mut rng);
            let b = tournament(&ranks, &crowding, n, &mut rng);
            let mut child_a = positions[a].clone();
            let mut child_b = positions[b].clone();
            let gate: F = rng.random_range(F::zero()..F::one());
            if gate < params.crossover_prob {
                sbx_crossover(&mut child_a, &mut child_b, bounds, params.crossover_eta, &mut rng);
            }
            polynomial_mutation(&mut child_a, bounds, mutation_prob, params.mutation_eta, &mut rng);
            polynomial_mutation(&mut child_b, bounds, mutation_prob, params.mutation_eta, &mut rng);
            offspring.push(child_a);
            offspring.push(child_b);
        }
        let offspring_points = evaluate_all(problem, &offspring, params.parallel);

        positions.extend(offspring);
        points.extend(offspring_points);
        let (next_positions, next_points) = select_survivors(positions, points, n);
        positions = next_positions;
        points = next_points;
        observer(generation, &points);
    }

    let fronts = non_dominated_sort(&points);
    fronts[0]
        .iter()
        .map(|&i| (positions[i].clone(), points[i].clone()))
        .collect()
}

fn rank_and_crowd<F: Scalar>(
    fronts: &[Vec<usize>],
    points: &[ObjectivePoint<F>],
) -> (Vec<usize>, Vec<F>) {
    let mut ranks = vec![0usize; points.len()];
    let mut crowding = vec![F::zero(); points.len()];
    for (rank, front) in fronts.iter().enumerate() {
        let members: Vec<ObjectivePoint<F>> = front.iter().map(|&i| points[i].clone()).collect();
        let distances = crowding_distance(&members);
        for (&i, d) in front.iter().zip(distances) {
            ranks[i] = rank;
            crowding[i] = d;
        }
    }
    (ranks, crowding)
}

/// Binary tournament on (rank asc, crowding desc); exact ties fall to a
/// coin flip so selection pressure stays unbiased.
fn tournament<F: Scalar>(
    ranks: &[usize],
    crowding: &[F],
    n: usize,
    rng: &mut impl Rng,
) -> usize {
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    match ranks[a]
        .cmp(&ranks[b])
        .then_with(|| crowding[b].partial_cmp(&crowding[a]).unwrap())
    {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if rng.random::<bool>() {
                a
            } else {
                b
            }
        }
    }
}

fn sbx_crossover<F: Scalar>(
    a: &mut [F],
    b: &mut [F],
    bounds: &[VarBound<F>],
    eta: F,
    rng: &mut impl Rng,
) {
    let half = F::of(0.5);
    for d in 0..a.len() {
        let gate: F = rng.random_range(F::zero()..F::one());
        if gate >= half {
            continue;
        }
        let u: F = rng.random_range(F::zero()..F::one());
        let exponent = F::one() / (eta + F::one());
        let spread = if u <= half {
            (F::of(2.0) * u).powf(exponent)
        } else {
            (F::one() / (F::of(2.0) * (F::one() - u))).powf(exponent)
        };
        let (y1, y2) = (a[d], b[d]);
        let sum = y1 + y2;
        let gap = (y2 - y1).abs();
        a[d] = bounds[d].clamp(half * (sum - spread * gap));
        b[d] = bounds[d].clamp(half * (sum + spread * gap));
    }
}

fn polynomial_mutation<F: Scalar>(
    x: &mut [F],
    bounds: &[VarBound<F>],
    prob: F,
    eta: F,
    rng: &mut impl Rng,
) {
    let half = F::of(0.5);
    let two = F::of(2.0);
    for d in 0..x.len() {
        let gate: F = rng.random_range(F::zero()..F::one());
        if gate >= prob {
            continue;
        }
        let (lo, hi) = (bounds[d].low, bounds[d].high);
        let range = hi - lo;
        // NaN ranges skip the axis too, hence no plain `<=` comparison.
        let degenerate = range <= F::zero() || range.is_nan();
        if degenerate {
            continue;
        }
        let u: F = rng.random_range(F::zero()..F::one());
        let exponent = F::one() / (eta + F::one());
        let delta = if u < half {
            let toward_low = (x[d] - lo) / range;
            let v = two * u + (F::one() - two * u) * (F::one() - toward_low).powf(eta + F::one());
            v.powf(exponent) - F::one()
        } else {
            let toward_high = (hi - x[d]) / range;
            let v = two * (F::one() - u)
                + two * (u - half) * (F::one() - toward_high).powf(eta + F::one());
            F::one() - v.powf(exponent)
        };
        x[d] = bounds[d].clamp(x[d] + delta * range);
    }
}

/// Keeps the best `n` of the merged population: whole fronts while they fit,
/// then the split front by descending crowding (index order on exact ties).
fn select_survivors<F: Scalar>(
    positions: Vec<Vec<F>>,
    points: Vec<ObjectivePoint<F>>,
    n: usize,
) -> (Vec<Vec<F>>, Vec<ObjectivePoint<F>>) {
    let fronts = non_dominated_sort(&points);
    let mut chosen = Vec::with_capacity(n);
    for front in fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
            if chosen.len() == n {
                break;
            }
        } else {
            let members: Vec<ObjectivePoint<F>> =
                front.iter().map(|&i| points[i].clone()).collect();
            let distances = crowding_distance(&members);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&x, &y| {
                distances[y]
                    .partial_cmp(&distances[x])
                    .unwrap()
                    .then(front[x].cmp(&front[y]))
            });
            chosen.extend(order[..n - chosen.len()].iter().map(|&w| front[w]));
            break;
        }
    }

    let keep: std::collections::HashSet<usize> = chosen.iter().copied().collect();
    let mut next_positions = Vec::with_capacity(n);
    let mut next_points = Vec::with_capacity(n);
    for (i, (pos, pt)) in positions.into_iter().zip(points).enumerate() {
        if keep.contains(&i) {
            next_positions.push(pos);
            next_points.push(pt);
        }
    }
    (next_positions, next_points)
}
