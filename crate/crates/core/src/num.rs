//! Scalar abstraction for the numeric kernels.
//!
//! Topic inference, clustering, and embedding are written against [`Scalar`]
//! so they run on `f32` or `f64` unchanged. The pipeline itself uses `f64`;
//! concrete aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by every numeric kernel in this crate.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used to feed literals and RNG draws into
    /// generic code. All randomness is drawn as `f64` and converted, so f32
    /// and f64 instantiations consume identical RNG streams.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from(value).expect("finite f64 converts to any float scalar")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
