use num_bigint::BigInt;
use num_rational::BigRational;

use super::coeff::Coeff;
use super::ops::laplacian;
use super::poly::BigradedPolynomial;
use crate::error::{Error, Result};

/// Writes a bihomogeneous `P` of bidegree `(a, b)` as
/// `P = Σ_k |z|^{2k} h_k` with each `h_k` harmonic of bidegree
/// `(a−k, b−k)`. Returns the nonzero `(k, h_k)` in increasing `k`.
///
/// Works by recursion on `ΔP`: for harmonic `h` of total degree `m`,
/// `Δ(|z|^{2k} h) = 2k(2k + 2m + 2n − 2) |z|^{2k−2} h`.
pub fn harmonic_decompose<C: Coeff>(poly: &BigradedPolynomial<C>) -> Result<Vec<(u32, BigradedPolynomial<C>)>> {
    if poly.is_zero() {
        return Ok(Vec::new());
    }
    let (a, b) = poly
        .bidegree()
        .ok_or_else(|| Error::Invalid("harmonic decomposition needs a bihomogeneous polynomial".into()))?;
    let n = poly.dim() as i64;
    let lap = laplacian(poly);
    let lower = harmonic_decompose(&lap)?;
    let r2 = BigradedPolynomial::<C>::norm_squared(poly.dim());
    let mut out = Vec::with_capacity(lower.len() + 1);
    let mut rest = poly.clone();
    for (j, g) in lower {
        let k = j as i64 + 1;
        let m = (a + b) as i64 - 2 * k;
        let factor = BigRational::new(BigInt::from(1), BigInt::from(2 * k * (2 * k + 2 * m + 2 * n - 2)));
        let h = g.scale(&C::from_rational(&factor));
        rest = &rest - &(&power(&r2, k as u32) * &h);
        out.push((k as u32, h));
    }
    if !rest.is_zero() {
        out.insert(0, (0, rest));
    }
    Ok(out)
}

/// `Σ_k |z|^{2k} h_k`.
pub fn reconstruct<C: Coeff>(n: usize, parts: &[(u32, BigradedPolynomial<C>)]) -> BigradedPolynomial<C> {
    let r2 = BigradedPolynomial::<C>::norm_squared(n);
    parts
        .iter()
        .fold(BigradedPolynomial::zero(n), |acc, (k, h)| &acc + &(&power(&r2, *k) * h))
}

pub(crate) fn power<C: Coeff>(p: &BigradedPolynomial<C>, k: u32) -> BigradedPolynomial<C> {
    let mut out = BigradedPolynomial::constant(p.dim(), C::one());
    for _ in 0..k {
        out = &out * p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{exact, ratio, ExactComplex};

    type P = BigradedPolynomial<ExactComplex>;

    #[test]
    fn z1_zbar1_splits_off_the_radial_part() {
        let p = P::monomial(2, &[1, 0], &[1, 0], exact(1, 0)).unwrap();
        let parts = harmonic_decompose(&p).unwrap();
        assert_eq!(parts.len(), 2);
        let half = ExactComplex::from_rational(&ratio(1, 2));
        let h0 = &p - &P::norm_squared(2).scale(&half);
        assert_eq!(parts[0], (0, h0));
        assert_eq!(parts[1], (1, P::constant(2, half)));
    }

    #[test]
    fn harmonic_input_is_a_single_component() {
        let p = P::monomial(2, &[3, 0], &[0, 2], exact(2, -1)).unwrap();
        assert_eq!(harmonic_decompose(&p).unwrap(), vec![(0, p)]);
    }

    #[test]
    fn mixed_bidegree_is_rejected() {
        let p = &P::monomial(2, &[1, 0], &[0, 0], exact(1, 0)).unwrap() + &P::constant(2, exact(1, 0));
        assert!(harmonic_decompose(&p).is_err());
    }
}
