//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the planner can run on.
///
/// Implemented for `f32` and `f64`. Configuration files and random draws are
/// always produced in `f64` and converted once, so an `f32` run sees the same
/// realization rounded to single precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for finite input.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal is representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
