//! Scalar abstraction for the numeric core.
//!
//! Everything downstream of the dataset types is generic over [`Scalar`] so
//! the whole pipeline runs in `f32` or `f64` (the crate root exports `f64`
//! aliases for the common case). Tolerance-sensitive work — the 1e-9 energy
//! balances, the 1e-12 objective checks — wants `f64`; `f32` is there for
//! memory-bound batch studies.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::distr::uniform::SampleUniform;

/// Floating-point scalar usable across simulation, economics, and the
/// optimizers. Blanket-implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + SampleUniform
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` literal into this scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts to Scalar")
    }

    /// Widen to `f64` (lossless for f32/f64; infinities pass through).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    /// Lift an integer count into this scalar type.
    fn of_count(n: u32) -> Self {
        Self::from_u32(n).expect("u32 count converts to Scalar")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + SampleUniform
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
