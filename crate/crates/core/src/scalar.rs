use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

/// Floating-point type the physics is generic over.
pub trait Scalar:
    Float + FloatConst + FftNum + Display + LowerExp + Debug + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `(cosh x, sinh x)` without cancellation near zero.
pub(crate) fn cosh_sinh<T: Scalar>(x: T) -> (T, T) {
    let two = T::lit(2.0);
    if x < T::zero() {
        let (c, s) = cosh_sinh(-x);
        return (c, -s);
    }
    if x < T::lit(1e-8) {
        let x2 = x * x;
        let cosh = T::one() + x2 / two + x2 * x2 / T::lit(24.0);
        let sinh = x + x2 * x / T::lit(6.0);
        return (cosh, sinh);
    }
    // e^x − 1 keeps the small-argument digits; e^x − e^−x = m(m+2)/(m+1).
    let m = x.exp_m1();
    let e = m + T::one();
    let sinh = m * (m + two) / (two * e);
    let cosh = T::one() + m * m / (two * e);
    (cosh, sinh)
}

/// `cosh x − 1`, accurate for small `x`.
pub(crate) fn cosh_m1<T: Scalar>(x: T) -> T {
    let (_, s) = cosh_sinh(x / T::lit(2.0));
    T::lit(2.0) * s * s
}
