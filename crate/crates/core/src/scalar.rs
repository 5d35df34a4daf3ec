//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(lit(re), lit(im))
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Numerical tolerances.
///
/// Defaults are `herm = num = psd = 1e-10` and `degen = 1e-8`, floored at a
/// small multiple of machine epsilon so the same defaults stay usable in `f32`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    pub herm: T,
    pub num: T,
    pub psd: T,
    pub degen: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let floor = T::epsilon() * lit(1e4);
        Tolerances {
            herm: lit::<T>(1e-10).max(floor),
            num: lit::<T>(1e-10).max(floor),
            psd: lit::<T>(1e-10).max(floor),
            degen: lit::<T>(1e-8).max(floor),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Same value for the Hermiticity, numerical and positivity checks.
    pub fn uniform(tol: T) -> Self {
        Tolerances {
            herm: tol,
            num: tol,
            psd: tol,
            ..Self::default()
        }
    }
}
