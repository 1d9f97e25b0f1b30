//! Analytic benchmark problems used to validate the optimizers.

use crate::num::Scalar;
use crate::pareto::ObjectivePoint;
use crate::problem::{Problem, VarBound};

/// Convex two-objective benchmark on `[0,1]^d` with the analytic front
/// `f2 = 1 - sqrt(f1)`, reached exactly when every tail variable is zero.
#[derive(Debug, Clone)]
pub struct ConvexFrontBenchmark<F> {
    bounds: Vec<VarBound<F>>,
}

impl<F: Scalar> ConvexFrontBenchmark<F> {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "needs a position variable and at least one tail variable");
        Self {
            bounds: vec![VarBound::continuous(F::zero(), F::one()); dim],
        }
    }

    /// Front value `1 - sqrt(f1)` for `f1` in [0, 1].
    pub fn front_f2(f1: F) -> F {
        F::one() - f1.sqrt()
    }

    /// Exact hypervolume dominated by the analytic front under `reference`.
    ///
    /// Integrates `ref1 - (1 - sqrt(x))` over [0, 1] and adds the slab
    /// between x = 1 and the reference.
    pub fn front_hypervolume(reference: (F, F)) -> F {
        let (r0, r1) = reference;
        let two_thirds = F::of(2.0 / 3.0);
        (r1 - F::one()) * F::one() + two_thirds + (r0 - F::one()) * r1
    }
}

impl<F: Scalar> Problem<F> for ConvexFrontBenchmark<F> {
    fn bounds(&self) -> &[VarBound<F>] {
        &self.bounds
    }

    fn evaluate(&self, position: &[F]) -> ObjectivePoint<F> {
        let d = position.len();
        let f1 = position[0];
        let tail: F = position[1..].iter().fold(F::zero(), |acc, &x| acc + x);
        let g = F::one() + F::of(9.0) * tail / F::of_count((d - 1) as u32);
        let f2 = g * (F::one() - (f1 / g).sqrt());
        ObjectivePoint::new(vec![f1, f2])
    }
}

/// Degenerate single-objective check: a shifted quadratic bowl with known
/// minimum value 1 at the center, paired with a constant second objective.
#[derive(Debug, Clone)]
pub struct QuadraticBowl<F> {
    bounds: Vec<VarBound<F>>,
    center: Vec<F>,
}

impl<F: Scalar> QuadraticBowl<F> {
    pub fn new(center: Vec<F>) -> Self {
        assert!(!center.is_empty());
        Self {
            bounds: vec![VarBound::continuous(F::of(-5.0), F::of(5.0)); center.len()],
            center,
        }
    }

    pub const MINIMUM: f64 = 1.0;
}

impl<F: Scalar> Problem<F> for QuadraticBowl<F> {
    fn bounds(&self) -> &[VarBound<F>] {
        &self.bounds
    }

    fn evaluate(&self, position: &[F]) -> ObjectivePoint<F> {
        let sq = position
            .iter()
            .zip(&self.center)
            .fold(F::zero(), |acc, (&x, &c)| acc + (x - c) * (x - c));
        ObjectivePoint::new(vec![F::one() + sq, F::zero()])
    }
}
