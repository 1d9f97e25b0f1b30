//! The optimizer-facing problem abstraction.

use rayon::prelude::*;

use crate::num::Scalar;
use crate::pareto::ObjectivePoint;

/// Range of one decision variable.
///
/// `integral` marks variables the problem rounds at evaluation time; the
/// optimizers themselves always work on the continuous relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarBound<F> {
    pub low: F,
    pub high: F,
    pub integral: bool,
}

impl<F: Scalar> VarBound<F> {
    pub fn continuous(low: F, high: F) -> Self {
        debug_assert!(low <= high);
        Self { low, high, integral: false }
    }

    pub fn integer(low: F, high: F) -> Self {
        debug_assert!(low <= high);
        Self { low, high, integral: true }
    }

    pub fn clamp(&self, x: F) -> F {
        x.max(self.low).min(self.high)
    }
}

/// A multi-objective minimization problem over a box-bounded decision space.
///
/// `evaluate` must be pure: both optimizers run evaluations concurrently and
/// rely on identical results for identical positions.
pub trait Problem<F: Scalar>: Sync {
    fn bounds(&self) -> &[VarBound<F>];

    fn evaluate(&self, position: &[F]) -> ObjectivePoint<F>;
}

/// Evaluates a batch of positions, optionally across threads. The output
/// order always matches the input order, which keeps seeded runs identical
/// whether or not parallelism is enabled.
pub(crate) fn evaluate_all<F: Scalar, P: Problem<F> + ?Sized>(
    problem: &P,
    positions: &[Vec<F>],
    parallel: bool,
) -> Vec<ObjectivePoint<F>> {
    if parallel {
        positions.par_iter().map(|p| problem.evaluate(p)).collect()
    } else {
        positions.iter().map(|p| problem.evaluate(p)).collect()
    }
}
