//! Scalar abstraction for the numeric routines.

use std::fmt::{Debug, Display};
use std::iter::{Product, Sum};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
///
/// Implemented for `f32` and `f64`. Random draws are produced as `f64` and
/// converted, so switching the scalar type changes precision but not the
/// underlying random stream.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Product
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Conversion from `f64`, truncating precision if needed.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Conversion from a sample or node count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| Self::of(n as f64))
    }

    /// Lossy view as `f64` for reporting and special functions.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Product
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
