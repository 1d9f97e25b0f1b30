//! The sizing problem: pick PV array size, battery bank size, and depth of
//! discharge to trade cost of energy against loss of power supply.
//!
//! Decision vector layout is fixed: `[n_pv, n_bes, dod]`, with the first two
//! integral. Objectives come back as `(coe, llp)`, both minimized.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::econ::{annualized_total_cost, battery_life_years, compute_coe};
use crate::error::CoreError;
use crate::mopso::{run_mopso, MopsoParams};
use crate::nsga2::{run_nsga2, Nsga2Params};
use crate::num::Scalar;
use crate::pareto::ObjectivePoint;
use crate::problem::{Problem, VarBound};
use crate::simulate::{compute_llp, simulate};
use crate::system::{AnnualDataset, BatterySpec, CostParams, Design, PVSpec};

/// Largest design grid `brute_force_front` will evaluate.
pub const BRUTE_FORCE_CAP: usize = 100_000;

/// Which energy total divides annualized cost when forming COE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeDenominator {
    /// Energy actually delivered to the load. Penalizes systems that serve
    /// little of the demand; an idle system has infinite COE.
    ServedEnergy,
    /// Total demand, served or not.
    TotalLoad,
}

/// Optimizer selector for routines that can run either engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Mopso,
    Nsga2,
}

/// One row of a depth-of-discharge sweep: the cheapest design found at a
/// fixed `dod` subject to `llp <= epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<F> {
    pub dod: F,
    pub best_n_pv: u32,
    pub best_n_bes: u32,
    pub coe: F,
    pub llp: F,
    /// False when no design satisfying the reliability bound was found; the
    /// row then reports the least-unreliable candidate instead of being
    /// dropped.
    pub feasible: bool,
}

/// Rectangular design grid: the cartesian product of the three value lists.
#[derive(Debug, Clone)]
pub struct GridSpec<F> {
    pub n_pv: Vec<u32>,
    pub n_bes: Vec<u32>,
    pub dod: Vec<F>,
}

impl<F> GridSpec<F> {
    pub fn len(&self) -> usize {
        self.n_pv.len() * self.n_bes.len() * self.dod.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A design paired with its evaluated objectives, as returned by the
/// exhaustive front search.
pub type FrontEntry<F> = (Design<F>, ObjectivePoint<F>);

/// Memoized (coe, llp) pairs keyed by (n_pv, n_bes, dod bits).
type EvalCache<F> = Mutex<HashMap<(u32, u32, u64), (F, F)>>;

/// A standalone PV/battery sizing instance over a fixed dataset.
///
/// Evaluation is pure, so results are memoized per design; repeated calls
/// are bit-identical.
pub struct SizingProblem<F: Scalar> {
    dataset: AnnualDataset<F>,
    pv: PVSpec<F>,
    battery: BatterySpec<F>,
    costs: CostParams<F>,
    bounds: Vec<VarBound<F>>,
    denominator: CoeDenominator,
    cache: EvalCache<F>,
}

impl<F: Scalar> SizingProblem<F> {
    /// Validates the component specs and derives default bounds from the
    /// dataset: PV up to 10x the peak load, storage up to 20x the mean daily
    /// energy, depth of discharge in [0.2, 0.8].
    pub fn new(
        dataset: AnnualDataset<F>,
        pv: PVSpec<F>,
        battery: BatterySpec<F>,
        costs: CostParams<F>,
    ) -> Result<Self, CoreError> {
        pv.validate()?;
        battery.validate()?;
        costs.validate()?;
        let n_pv_high = (F::of(10.0) * dataset.peak_load() / pv.rated_power_per_unit).ceil();
        let n_bes_high = (F::of(20.0) * dataset.mean_daily_load() / battery.capacity_per_unit).ceil();
        let bounds = vec![
            VarBound::integer(F::zero(), n_pv_high),
            VarBound::integer(F::zero(), n_bes_high),
            VarBound::continuous(F::of(0.2), F::of(0.8)),
        ];
        Ok(Self {
            dataset,
            pv,
            battery,
            costs,
            bounds,
            denominator: CoeDenominator::ServedEnergy,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn dataset(&self) -> &AnnualDataset<F> {
        &self.dataset
    }

    pub fn pv(&self) -> &PVSpec<F> {
        &self.pv
    }

    pub fn battery(&self) -> &BatterySpec<F> {
        &self.battery
    }

    pub fn costs(&self) -> &CostParams<F> {
        &self.costs
    }

    pub fn denominator(&self) -> CoeDenominator {
        self.denominator
    }

    pub fn set_denominator(&mut self, denominator: CoeDenominator) {
        self.denominator = denominator;
        self.cache.lock().unwrap().clear();
    }

    /// Replaces the search bounds. Order is `[n_pv, n_bes, dod]`.
    pub fn set_bounds(&mut self, bounds: [VarBound<F>; 3]) -> Result<(), CoreError> {
        for (name, b) in ["n_pv", "n_bes", "dod"].iter().zip(bounds.iter()) {
            if !(b.low.is_finite() && b.high.is_finite() && b.low <= b.high) {
                return Err(CoreError::InvalidParameter {
                    name: "bounds",
                    reason: format!("{name} range [{}, {}] is not a finite interval", b.low, b.high),
                });
            }
        }
        if bounds[0].low < F::zero() || bounds[1].low < F::zero() {
            return Err(CoreError::InvalidParameter {
                name: "bounds",
                reason: "unit counts cannot be negative".to_string(),
            });
        }
        if bounds[2].low <= F::zero() || bounds[2].high > F::one() {
            return Err(CoreError::InvalidParameter {
                name: "bounds",
                reason: "dod must lie in (0, 1]".to_string(),
            });
        }
        self.bounds = bounds.to_vec();
        Ok(())
    }

    /// Snaps a continuous position onto a concrete design: integral variables
    /// round to the nearest in-bounds count, `dod` clamps to its interval.
    pub fn design_of(&self, position: &[F]) -> Design<F> {
        assert_eq!(position.len(), 3, "position must be [n_pv, n_bes, dod]");
        Design::new(
            round_count(position[0], &self.bounds[0]),
            round_count(position[1], &self.bounds[1]),
            self.bounds[2].clamp(position[2]),
        )
    }

    /// Simulates the design over the dataset and prices it.
    pub fn evaluate_design(&self, design: &Design<F>) -> ObjectivePoint<F> {
        let key = (design.n_pv, design.n_bes, design.dod.as_f64().to_bits());
        if let Some(&(coe, llp)) = self.cache.lock().unwrap().get(&key) {
            return ObjectivePoint::new(vec![coe, llp]);
        }
        let result = simulate(design, &self.dataset, &self.pv, &self.battery);
        let llp = compute_llp(&result);
        let life = battery_life_years(&result, design, &self.battery);
        let breakdown = annualized_total_cost(design, life, &self.costs);
        let energy = match self.denominator {
            CoeDenominator::ServedEnergy => result.served_energy,
            CoeDenominator::TotalLoad => result.total_load,
        };
        let coe = compute_coe(breakdown.atc, energy)
            .expect("served and total energy are nonnegative by construction");
        self.cache.lock().unwrap().insert(key, (coe, llp));
        ObjectivePoint::new(vec![coe, llp])
    }

    /// Exhaustively evaluates `grid` and returns its exact non-dominated set
    /// in grid iteration order (`n_pv` outermost, `dod` innermost).
    pub fn brute_force_front(&self, grid: &GridSpec<F>) -> Result<Vec<FrontEntry<F>>, CoreError> {
        if grid.len() > BRUTE_FORCE_CAP {
            return Err(CoreError::GridTooLarge { size: grid.len(), cap: BRUTE_FORCE_CAP });
        }
        let mut designs = Vec::with_capacity(grid.len());
        for &n_pv in &grid.n_pv {
            for &n_bes in &grid.n_bes {
                for &dod in &grid.dod {
                    designs.push(Design::new(n_pv, n_bes, dod));
                }
            }
        }
        let points: Vec<ObjectivePoint<F>> =
            designs.par_iter().map(|d| self.evaluate_design(d)).collect();
        let keep = nondominated_indices_2d(&points);
        Ok(keep.into_iter().map(|i| (designs[i], points[i].clone())).collect())
    }

    /// For each `dod` in turn, searches `(n_pv, n_bes)` for the cheapest
    /// design with `llp <= epsilon` and reports one row per value. Rows are
    /// seeded as `seed + row_index` so re-running reproduces them exactly.
    pub fn dod_sweep(
        &self,
        dod_values: &[F],
        epsilon: F,
        algorithm: Algorithm,
        seed: u64,
    ) -> Result<Vec<SweepRow<F>>, CoreError> {
        if !(epsilon >= F::zero() && epsilon <= F::one()) {
            return Err(CoreError::InvalidParameter {
                name: "epsilon",
                reason: format!("{} is not in [0, 1]", epsilon.as_f64()),
            });
        }
        for &dod in dod_values {
            if !(dod > F::zero() && dod <= F::one()) {
                return Err(CoreError::InvalidParameter {
                    name: "dod",
                    reason: format!("{} is not in (0, 1]", dod.as_f64()),
                });
            }
        }
        let mut rows = Vec::with_capacity(dod_values.len());
        for (i, &dod) in dod_values.iter().enumerate() {
            let wrapper = CheapestReliable {
                problem: self,
                bounds: [self.bounds[0], self.bounds[1]],
                dod,
                epsilon,
            };
            let row_seed = seed.wrapping_add(i as u64);
            let best_position = match algorithm {
                Algorithm::Mopso => {
                    let params = MopsoParams { seed: row_seed, ..MopsoParams::default() };
                    let archive = run_mopso(&wrapper, &params);
                    archive
                        .entries()
                        .first()
                        .map(|(pos, _)| pos.clone())
                        .expect("swarm always yields at least one archive entry")
                }
                Algorithm::Nsga2 => {
                    let params = Nsga2Params { seed: row_seed, ..Nsga2Params::default() };
                    let front = run_nsga2(&wrapper, &params);
                    front.into_iter().next().map(|(pos, _)| pos).expect("population is nonempty")
                }
            };
            let seeded = wrapper.design_for(&best_position);
            let design = self.polish(seeded, dod, epsilon);
            let point = self.evaluate_design(&design);
            rows.push(SweepRow {
                dod,
                best_n_pv: design.n_pv,
                best_n_bes: design.n_bes,
                coe: point.values[0],
                llp: point.values[1],
                feasible: point.values[1] <= epsilon,
            });
        }
        Ok(rows)
    }

    /// Deterministic multi-scale coordinate descent on the unit-count
    /// lattice, so sweep rows land on a local optimum regardless of where
    /// the metaheuristic stopped.
    fn polish(&self, start: Design<F>, dod: F, epsilon: F) -> Design<F> {
        let lo = |b: &VarBound<F>| b.low.ceil().as_f64() as i64;
        let hi = |b: &VarBound<F>| b.high.floor().as_f64() as i64;
        let (pv_lo, pv_hi) = (lo(&self.bounds[0]), hi(&self.bounds[0]));
        let (bes_lo, bes_hi) = (lo(&self.bounds[1]), hi(&self.bounds[1]));

        let value_at = |n_pv: i64, n_bes: i64| {
            let point = self.evaluate_design(&Design::new(n_pv as u32, n_bes as u32, dod));
            penalized_value(point.values[0], point.values[1], epsilon)
        };

        let mut here = (start.n_pv as i64, start.n_bes as i64);
        let mut best = value_at(here.0, here.1);
        for step in [256, 64, 16, 4, 1] {
            loop {
                let mut moved = false;
                for (dx, dy) in
                    [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]
                {
                    let cand = (
                        (here.0 + dx * step).clamp(pv_lo, pv_hi),
                        (here.1 + dy * step).clamp(bes_lo, bes_hi),
                    );
                    if cand == here {
                        continue;
                    }
                    let value = value_at(cand.0, cand.1);
                    if value < best {
                        best = value;
                        here = cand;
                        moved = true;
                    }
                }
                if !moved {
                    break;
                }
            }
        }
        Design::new(here.0 as u32, here.1 as u32, dod)
    }
}

impl<F: Scalar> Problem<F> for SizingProblem<F> {
    fn bounds(&self) -> &[VarBound<F>] {
        &self.bounds
    }

    fn evaluate(&self, position: &[F]) -> ObjectivePoint<F> {
        self.evaluate_design(&self.design_of(position))
    }
}

/// Restriction of a sizing problem to a finite design grid.
///
/// The search space becomes the grid index along each axis, so any optimizer
/// position maps onto an exact grid member. Used to compare metaheuristics
/// against `brute_force_front` on the same footing.
pub struct GridRestricted<'a, F: Scalar> {
    problem: &'a SizingProblem<F>,
    grid: &'a GridSpec<F>,
    bounds: Vec<VarBound<F>>,
}

impl<'a, F: Scalar> GridRestricted<'a, F> {
    /// pre: every grid axis is nonempty.
    pub fn new(problem: &'a SizingProblem<F>, grid: &'a GridSpec<F>) -> Self {
        assert!(
            !grid.n_pv.is_empty() && !grid.n_bes.is_empty() && !grid.dod.is_empty(),
            "grid axes must be nonempty"
        );
        let axis = |len: usize| VarBound::integer(F::zero(), F::of_count(len as u32 - 1));
        let bounds = vec![axis(grid.n_pv.len()), axis(grid.n_bes.len()), axis(grid.dod.len())];
        Self { problem, grid, bounds }
    }

    /// Maps an index-space position onto the underlying grid design.
    pub fn design_for(&self, position: &[F]) -> Design<F> {
        let i = round_count(position[0], &self.bounds[0]) as usize;
        let j = round_count(position[1], &self.bounds[1]) as usize;
        let k = round_count(position[2], &self.bounds[2]) as usize;
        Design::new(self.grid.n_pv[i], self.grid.n_bes[j], self.grid.dod[k])
    }
}

impl<F: Scalar> Problem<F> for GridRestricted<'_, F> {
    fn bounds(&self) -> &[VarBound<F>] {
        &self.bounds
    }

    fn evaluate(&self, position: &[F]) -> ObjectivePoint<F> {
        self.problem.evaluate_design(&self.design_for(position))
    }
}

/// Scalarized helper behind `dod_sweep`: minimize COE at fixed `dod` with
/// reliability folded in as a large graded penalty, so the two-objective
/// engines degenerate to a single-best search.
struct CheapestReliable<'a, F: Scalar> {
    problem: &'a SizingProblem<F>,
    bounds: [VarBound<F>; 2],
    dod: F,
    epsilon: F,
}

impl<F: Scalar> CheapestReliable<'_, F> {
    fn design_for(&self, position: &[F]) -> Design<F> {
        Design::new(
            round_count(position[0], &self.bounds[0]),
            round_count(position[1], &self.bounds[1]),
            self.dod,
        )
    }
}

impl<F: Scalar> Problem<F> for CheapestReliable<'_, F> {
    fn bounds(&self) -> &[VarBound<F>] {
        &self.bounds
    }

    fn evaluate(&self, position: &[F]) -> ObjectivePoint<F> {
        let point = self.problem.evaluate_design(&self.design_for(position));
        let value = penalized_value(point.values[0], point.values[1], self.epsilon);
        ObjectivePoint::new(vec![value, F::zero()])
    }
}

/// COE when reliable enough, otherwise a graded penalty that still slopes
/// toward feasibility.
fn penalized_value<F: Scalar>(coe: F, llp: F, epsilon: F) -> F {
    if llp <= epsilon {
        coe
    } else {
        F::of(1e6) * (F::one() + llp - epsilon)
    }
}

fn round_count<F: Scalar>(x: F, bound: &VarBound<F>) -> u32 {
    let lo = bound.low.ceil();
    let hi = bound.high.floor();
    let snapped = x.round().max(lo).min(hi);
    snapped.as_f64() as u32
}

/// Exact non-dominated subset for two-objective point sets, by plane sweep.
/// Duplicates of a front member are kept, matching pairwise dominance.
fn nondominated_indices_2d<F: Scalar>(points: &[ObjectivePoint<F>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a].values, &points[b].values);
        pa[0].partial_cmp(&pb[0])
            .unwrap()
            .then(pa[1].partial_cmp(&pb[1]).unwrap())
            .then(a.cmp(&b))
    });

    let mut keep = Vec::new();
    let mut best_f1_before: Option<F> = None;
    let mut g = 0;
    while g < order.len() {
        let f0 = points[order[g]].values[0];
        let mut end = g;
        while end < order.len() && points[order[end]].values[0] == f0 {
            end += 1;
        }
        let group_min = points[order[g]].values[1];
        let survives = match best_f1_before {
            Some(prior) => group_min < prior,
            None => true,
        };
        if survives {
            for &idx in &order[g..end] {
                if points[idx].values[1] == group_min {
                    keep.push(idx);
                }
            }
        }
        best_f1_before = Some(match best_f1_before {
            Some(prior) if prior < group_min => prior,
            _ => group_min,
        });
        g = end;
    }
    keep.sort_unstable();
    keep
}
