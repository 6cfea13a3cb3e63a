//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub use num_complex::Complex;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn to_f64_(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// True for types whose unit roundoff is coarser than ~1e-10 (i.e. `f32`).
    fn is_low_precision() -> bool {
        Self::epsilon().to_f64_() > 1e-10
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Total order on complex numbers by (re, im); NaN-free inputs assumed.
pub(crate) fn cmp_re_im<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// Exact bitwise equality of both components.
#[inline]
pub(crate) fn exact_eq<T: Real>(a: Complex<T>, b: Complex<T>) -> bool {
    a.re == b.re && a.im == b.im
}

/// n! computed as an exact integer where it fits in `u128`, then converted.
pub fn factorial<T: Real>(n: usize) -> T {
    if n <= 34 {
        let exact: u128 = (1..=n as u128).product();
        T::from_u128(exact).unwrap_or_else(T::infinity)
    } else {
        (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_sixteen_is_exact() {
        assert_eq!(factorial::<f64>(16), 20922789888000.0);
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f32>(10), 3628800.0);
    }
}
