//! Monomial moments of the normalized surface measure and of the weighted
//! ball measures `dμ_s = c_s (1−|z|²)^s dV`, both of total mass one.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::coeff::Coeff;
use super::poly::{BigradedPolynomial, MultiIndexPair};
use crate::error::{Error, Result};

/// `∫ |z^μ|² dσ = (n−1)! μ! / (n−1+|μ|)!`, exactly.
pub fn sphere_moment(n: usize, mu: &[u32]) -> BigRational {
    let mut num = BigInt::one();
    for &m in mu {
        for t in 1..=m {
            num *= t;
        }
    }
    let total: u32 = mu.iter().sum();
    let mut den = BigInt::one();
    for j in 0..total {
        den *= n as u64 + j as u64;
    }
    BigRational::new(num, den)
}

/// `∫ |z^μ|² dμ_s = μ! / (s+n+1)_{|μ|}` for `s > −1`; `s = −1` gives the
/// sphere moment.
pub fn ball_moment(n: usize, mu: &[u32], s: f64) -> f64 {
    // interleave numerator and denominator factors so nothing overflows
    let base = s + n as f64 + 1.0;
    let mut v = 1.0;
    let mut j = 0.0;
    for &m in mu {
        for t in 1..=m {
            v *= t as f64 / (base + j);
            j += 1.0;
        }
    }
    v
}

/// Pairs `(key, term)` grouped by `alpha − beta`: only terms with equal
/// keys can have nonzero mixed moments.
fn buckets<C: Coeff>(p: &BigradedPolynomial<C>) -> HashMap<Vec<i64>, Vec<(&MultiIndexPair, &C)>> {
    let mut map: HashMap<Vec<i64>, Vec<_>> = HashMap::new();
    for (m, c) in p.terms() {
        let key = m.alpha.iter().zip(&m.beta).map(|(&a, &b)| a as i64 - b as i64).collect();
        map.entry(key).or_default().push((m, c));
    }
    map
}

fn check_dims<C: Coeff>(p: &BigradedPolynomial<C>, q: &BigradedPolynomial<C>) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::Invalid(format!("inner product of polynomials over C^{} and C^{}", p.dim(), q.dim())));
    }
    Ok(())
}

/// `⟨z^α z̄^β, z^γ z̄^δ⟩` pairs to the moment of `μ = α+δ`, and vanishes
/// unless `α+δ = β+γ`.
fn paired_exponent(a: &MultiIndexPair, b: &MultiIndexPair) -> Vec<u32> {
    a.alpha.iter().zip(&b.beta).map(|(x, y)| x + y).collect()
}

/// `∫ P Q̄ dσ` over the unit sphere, exact in the coefficient field.
pub fn sphere_inner_product<C: Coeff>(p: &BigradedPolynomial<C>, q: &BigradedPolynomial<C>) -> Result<C> {
    check_dims(p, q)?;
    let n = p.dim();
    let bq = buckets(q);
    let mut acc = C::zero();
    for (key, terms) in buckets(p) {
        let Some(others) = bq.get(&key) else { continue };
        for (ma, ca) in &terms {
            for (mb, cb) in others {
                let mu = paired_exponent(ma, mb);
                let w = C::from_rational(&sphere_moment(n, &mu));
                acc = acc + (*ca).clone() * cb.conj() * w;
            }
        }
    }
    Ok(acc)
}

/// `∫ P Q̄ dμ_s` over the unit ball, `s > −1`.
pub fn ball_inner_product<C: Coeff>(p: &BigradedPolynomial<C>, q: &BigradedPolynomial<C>, s: f64) -> Result<Complex64> {
    check_dims(p, q)?;
    if !(s > -1.0) {
        return Err(Error::domain(format!("ball weight exponent s = {s} must exceed −1")));
    }
    let n = p.dim();
    let max_deg = p.terms().chain(q.terms()).map(|(m, _)| {
        let (a, b) = m.bidegree();
        (a + b) as usize
    });
    let max_deg = max_deg.max().unwrap_or(0);
    // ln k! and ln (s+n+1)_j, so each pairing costs O(n) without allocation
    let mut ln_fact = vec![0.0; max_deg + 1];
    let mut ln_rise = vec![0.0; max_deg + 1];
    for k in 1..=max_deg {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
        ln_rise[k] = ln_rise[k - 1] + (s + n as f64 + k as f64).ln();
    }
    let bq = buckets(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for (key, terms) in buckets(p) {
        let Some(others) = bq.get(&key) else { continue };
        let others: Vec<_> = others.iter().map(|(m, c)| (*m, c.to_complex64().conj())).collect();
        for (ma, ca) in &terms {
            let ca = ca.to_complex64();
            let mut row = Complex64::new(0.0, 0.0);
            for (mb, cb) in &others {
                let mut ln_m = 0.0;
                let mut total = 0;
                for j in 0..n {
                    let e = (ma.alpha[j] + mb.beta[j]) as usize;
                    ln_m += ln_fact[e];
                    total += e;
                }
                row += cb * (ln_m - ln_rise[total]).exp();
            }
            acc += ca * row;
        }
    }
    Ok(acc)
}

/// `‖P‖²` on the sphere as a float.
pub fn sphere_norm_squared<C: Coeff>(p: &BigradedPolynomial<C>) -> f64 {
    sphere_inner_product(p, p).map(|v| v.to_complex64().re).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{exact, ratio, ExactComplex};
    use num_traits::Zero;

    type P = BigradedPolynomial<ExactComplex>;

    #[test]
    fn sphere_examples() {
        let z1 = P::coordinate(2, 1, false).unwrap();
        let z2 = P::coordinate(2, 2, false).unwrap();
        assert_eq!(sphere_inner_product(&z1, &z1).unwrap(), ExactComplex::from_rational(&ratio(1, 2)));
        assert!(sphere_inner_product(&z1, &z2).unwrap().is_zero());
        let m = P::monomial(2, &[1, 0], &[0, 1], exact(1, 0)).unwrap();
        assert_eq!(sphere_inner_product(&m, &m).unwrap(), ExactComplex::from_rational(&ratio(1, 6)));
    }

    #[test]
    fn sphere_mass_and_norm_squared_average() {
        let one = P::constant(3, exact(1, 0));
        assert_eq!(sphere_inner_product(&one, &one).unwrap(), exact(1, 0));
        // ∫|z|² dσ = 1 through the mixed pairing of |z|² with the constant 1
        let r2 = P::norm_squared(3);
        assert_eq!(sphere_inner_product(&r2, &one).unwrap(), exact(1, 0));
    }

    #[test]
    fn ball_moments_match_closed_form() {
        // α = (2,1), n = 2, s = 0.5: 2!·1!/(3.5)(4.5)(5.5)
        let expected = 2.0 / (3.5 * 4.5 * 5.5);
        assert!((ball_moment(2, &[2, 1], 0.5) - expected).abs() < 1e-16);
        let p = P::monomial(2, &[2, 1], &[0, 0], exact(1, 0)).unwrap();
        let v = ball_inner_product(&p, &p, 0.5).unwrap();
        assert!((v.re - expected).abs() < 1e-16 && v.im == 0.0);
        assert!(ball_inner_product(&p, &p, -1.0).is_err());
    }

    #[test]
    fn sphere_is_the_ball_limit() {
        let mu = [3, 0, 2];
        let exact_v = crate::algebra::coeff::rational_to_f64(&sphere_moment(3, &mu));
        assert!((ball_moment(3, &mu, -1.0) - exact_v).abs() < 1e-16);
    }

    #[test]
    fn conjugate_linearity() {
        let z1 = P::coordinate(2, 1, false).unwrap();
        let iz1 = z1.scale(&exact(0, 1));
        assert_eq!(sphere_inner_product(&iz1, &z1).unwrap(), ExactComplex::from_rational(&ratio(1, 2)) * exact(0, 1));
        assert_eq!(sphere_inner_product(&z1, &iz1).unwrap(), ExactComplex::from_rational(&ratio(1, 2)) * exact(0, -1));
    }
}
