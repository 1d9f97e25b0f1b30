//! Objective-space primitives shared by the optimizers: Pareto dominance,
//! fast non-dominated sorting, crowding distance, a 2-D hypervolume metric,
//! and knee-point selection.
//!
//! All objectives are minimized. Penalty sentinels (positive infinity) take
//! part in comparisons as worse than every finite value; NaN must never
//! enter an [`ObjectivePoint`].

use crate::error::CoreError;
use crate::num::Scalar;

/// A point in objective space (minimization).
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectivePoint<F> {
    pub values: Vec<F>,
}

impl<F: Scalar> ObjectivePoint<F> {
    pub fn new(values: Vec<F>) -> Self {
        debug_assert!(!values.is_empty());
        debug_assert!(values.iter().all(|v| !v.is_nan()));
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// True iff `a` is no worse than `b` everywhere and strictly better somewhere.
///
/// Panics when the dimensions differ.
pub fn dominates<F: Scalar>(a: &ObjectivePoint<F>, b: &ObjectivePoint<F>) -> bool {
    assert_eq!(a.dim(), b.dim(), "objective dimensions differ");
    let mut strict = false;
    for (&x, &y) in a.values.iter().zip(&b.values) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Fast non-dominated sorting by domination counts.
///
/// Front 0 is the non-dominated set; front k is non-dominated once fronts
/// below k are removed. Every input index appears in exactly one front.
pub fn non_dominated_sort<F: Scalar>(points: &[ObjectivePoint<F>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut remaining_dominators = vec![0usize; n];

    for p in 0..n {
        for q in (p + 1)..n {
            if dominates(&points[p], &points[q]) {
                dominated_by[p].push(q);
                remaining_dominators[q] += 1;
            } else if dominates(&points[q], &points[p]) {
                dominated_by[q].push(p);
                remaining_dominators[p] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&p| remaining_dominators[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                remaining_dominators[q] -= 1;
                if remaining_dominators[q] == 0 {
                    next.push(q);
                }
            }
        }
        // Fronts come out in ascending index order, not discovery order.
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance of each point within one front.
///
/// Boundary points of every objective get infinity; interior points
/// accumulate their neighbor gap normalized by the objective's range. A
/// zero or non-finite range contributes nothing (a non-finite range would
/// otherwise poison the sums with NaN).
pub fn crowding_distance<F: Scalar>(front: &[ObjectivePoint<F>]) -> Vec<F> {
    let n = front.len();
    let mut distance = vec![F::zero(); n];
    if n == 0 {
        return distance;
    }
    let dim = front[0].dim();

    for k in 0..dim {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            front[i].values[k]
                .partial_cmp(&front[j].values[k])
                .expect("objective values must not be NaN")
                .then(i.cmp(&j))
        });

        distance[order[0]] = F::infinity();
        distance[order[n - 1]] = F::infinity();
        let range = front[order[n - 1]].values[k] - front[order[0]].values[k];
        if !(range.is_finite() && range > F::zero()) {
            continue;
        }
        for w in 1..n.saturating_sub(1) {
            let gap = front[order[w + 1]].values[k] - front[order[w - 1]].values[k];
            if distance[order[w]].is_finite() {
                distance[order[w]] += gap / range;
            }
        }
    }
    distance
}

/// Area dominated by a 2-D front, bounded by a reference point.
///
/// Dominated and duplicate input points are ignored; every surviving point
/// must strictly dominate the reference.
pub fn hypervolume_2d<F: Scalar>(
    front: &[ObjectivePoint<F>],
    reference: &ObjectivePoint<F>,
) -> Result<F, CoreError> {
    if reference.dim() != 2 {
        return Err(CoreError::DimensionMismatch {
            left: reference.dim(),
            right: 2,
        });
    }
    for (i, p) in front.iter().enumerate() {
        if p.dim() != 2 {
            return Err(CoreError::DimensionMismatch { left: p.dim(), right: 2 });
        }
        if !dominates(p, reference) {
            return Err(CoreError::NotDominatingReference { index: i });
        }
    }

    // Reduce to the staircase: sort by the first objective, keep strict
    // improvements in the second.
    let mut order: Vec<usize> = (0..front.len()).collect();
    order.sort_by(|&i, &j| {
        front[i].values[0]
            .partial_cmp(&front[j].values[0])
            .unwrap()
            .then(front[i].values[1].partial_cmp(&front[j].values[1]).unwrap())
    });
    let mut staircase: Vec<&ObjectivePoint<F>> = Vec::new();
    for &i in &order {
        if staircase.last().is_none_or(|last| front[i].values[1] < last.values[1]) {
            staircase.push(&front[i]);
        }
    }

    let mut area = F::zero();
    for (w, p) in staircase.iter().enumerate() {
        let right = staircase
            .get(w + 1)
            .map_or(reference.values[0], |next| next.values[0]);
        area += (right - p.values[0]) * (reference.values[1] - p.values[1]);
    }
    Ok(area)
}

/// Index of the front point closest to the ideal point after per-objective
/// normalization; `None` when no finite point exists.
///
/// Degenerate objectives (zero range) drop out of the distance.
pub fn knee_index<F: Scalar>(front: &[ObjectivePoint<F>]) -> Option<usize> {
    let finite: Vec<usize> = (0..front.len())
        .filter(|&i| front[i].values.iter().all(|v| v.is_finite()))
        .collect();
    let first = *finite.first()?;
    let dim = front[first].dim();

    let mut lo = front[first].values.clone();
    let mut hi = front[first].values.clone();
    for &i in &finite {
        for k in 0..dim {
            lo[k] = lo[k].min(front[i].values[k]);
            hi[k] = hi[k].max(front[i].values[k]);
        }
    }

    let mut best = first;
    let mut best_dist = F::infinity();
    for &i in &finite {
        let mut dist = F::zero();
        for k in 0..dim {
            let range = hi[k] - lo[k];
            if range > F::zero() {
                let t = (front[i].values[k] - lo[k]) / range;
                dist += t * t;
            }
        }
        if dist < best_dist {
            best_dist = dist;
            best = i;
        }
    }
    Some(best)
}
