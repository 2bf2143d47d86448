//! Scalar abstraction: every numerical routine in the crate is generic over a
//! real floating type `T`, with complex entries `Complex<T>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar backing the complex arithmetic: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Sum + Send + Sync + 'static
{
    /// Default verification tolerance τ (absolute, entrywise).
    fn default_tolerance() -> Self;

    /// Residual norm above which a Gram–Schmidt candidate is kept.
    fn rank_keep() -> Self;

    /// Residual norm below which a Gram–Schmidt candidate is dropped as dependent.
    /// Residuals between this and [`Real::rank_keep`] are reported as ill-conditioned.
    fn rank_drop() -> Self;

    /// Tolerance for the preconditions of checked maps used inside verifiers.
    /// Never tighter than [`Real::rank_keep`], so that a demanding `tol` makes
    /// checks fail in the report instead of aborting the verifier.
    fn gate(tol: Self) -> Self {
        tol.max(Self::rank_keep())
    }

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits in a float")
    }

    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal fits")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tolerance() -> Self {
        1e-9
    }
    fn rank_keep() -> Self {
        1e-8
    }
    fn rank_drop() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn default_tolerance() -> Self {
        1e-4
    }
    fn rank_keep() -> Self {
        1e-3
    }
    fn rank_drop() -> Self {
        1e-5
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `e^{2πi·num/den}`.
pub fn root_of_unity<T: Real>(num: usize, den: usize) -> Complex<T> {
    let angle = T::TAU() * T::of_usize(num % den) / T::of_usize(den);
    Complex::new(angle.cos(), angle.sin())
}
