use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::LinalgScalar;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the numeric kernels are generic over.
///
/// Implemented by `f32` and `f64`; the crate root exposes `f64` aliases for
/// the common types.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + LinalgScalar
    + Debug
    + Display
    + Send
    + Sync
{
    /// Conversion from an `f64` constant (lossy for `f32`).
    fn cast(x: f64) -> Self {
        Self::from_f64(x).expect("every finite f64 converts")
    }

    /// Conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits the scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum
        + LinalgScalar
        + Debug
        + Display
        + Send
        + Sync
{
}
