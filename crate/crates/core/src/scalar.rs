//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// Constants inside the crate are written as `f64` literals and lifted with
/// [`Real::lit`]. Accuracy targets quoted in the docs (e.g. `1e-10` for the
/// inverse error function) refer to `f64`; `f32` gets whatever its mantissa
/// allows.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lift a count into `Self`.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Machine epsilon scaled for iterative convergence checks.
    fn tolerance() -> Self;
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-15
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-7
    }
}

pub(crate) fn mean<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::count(xs.len())
}

/// Unbiased (n - 1) sample variance.
pub(crate) fn sample_variance<T: Real>(xs: &[T]) -> T {
    let m = mean(xs);
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    ss / T::count(xs.len() - 1)
}
