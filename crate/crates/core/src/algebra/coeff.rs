use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Complex numbers with arbitrary-precision rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Coefficient field of a [`BigradedPolynomial`](super::BigradedPolynomial).
///
/// Implemented for [`ExactComplex`], where every operator identity holds
/// exactly, and for [`Complex64`].
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_integer(v: i64) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    fn conj(&self) -> Self;
    fn to_complex64(&self) -> Complex64;
}

impl Coeff for ExactComplex {
    fn from_integer(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_rational(v: &BigRational) -> Self {
        Complex::new(v.clone(), BigRational::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Coeff for Complex64 {
    fn from_integer(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(v: &BigRational) -> Self {
        Complex64::new(rational_to_f64(v), 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

/// `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact complex number from integer parts.
pub fn exact(re: i64, im: i64) -> ExactComplex {
    Complex::new(ratio(re, 1), ratio(im, 1))
}

/// Exact complex number carrying the binary value of each float part.
pub fn exact_from_f64(re: f64, im: f64) -> Option<ExactComplex> {
    Some(Complex::new(BigRational::from_float(re)?, BigRational::from_float(im)?))
}

pub(crate) fn rational_to_f64(v: &BigRational) -> f64 {
    if let Some(x) = v.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // numerator or denominator beyond f64 range: rescale by powers of two
    let shift = v.numer().bits() as i64 - v.denom().bits() as i64;
    let scaled = if shift > 0 {
        v / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        v * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let (n, d) = (scaled.numer().to_f64().unwrap_or(f64::NAN), scaled.denom().to_f64().unwrap_or(f64::NAN));
    if n.is_finite() && d.is_finite() {
        return n / d * 2f64.powi(shift as i32);
    }
    let keep = 60u64;
    let nb = scaled.numer().bits().saturating_sub(keep);
    let db = scaled.denom().bits().saturating_sub(keep);
    let n = (scaled.numer() >> nb as usize).to_f64().unwrap_or(f64::NAN);
    let d = (scaled.denom() >> db as usize).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi(shift as i32 + nb as i32 - db as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(3) << 2000usize;
        let v = BigRational::new(big.clone(), (BigInt::from(2) << 2000usize) + BigInt::one());
        assert!((rational_to_f64(&v) - 1.5).abs() < 1e-15);
        assert_eq!(rational_to_f64(&ratio(-7, 4)), -1.75);
    }

    #[test]
    fn float_parts_are_exact() {
        let c = exact_from_f64(0.1, -2.5).unwrap();
        assert_eq!(c.to_complex64(), Complex64::new(0.1, -2.5));
        assert!(exact_from_f64(f64::NAN, 0.0).is_none());
    }
}
