use super::coeff::Coeff;
use super::poly::{check_index, BigradedPolynomial, MultiIndexPair};
use crate::error::Result;

/// `∂/∂z_j` or, with `conjugate`, `∂/∂z̄_j`; `j` is 1-based.
pub fn wirtinger<C: Coeff>(poly: &BigradedPolynomial<C>, j: usize, conjugate: bool) -> Result<BigradedPolynomial<C>> {
    check_index(poly.dim(), j)?;
    Ok(derivative(poly, j - 1, conjugate))
}

fn derivative<C: Coeff>(poly: &BigradedPolynomial<C>, j: usize, conjugate: bool) -> BigradedPolynomial<C> {
    let mut out = BigradedPolynomial::zero(poly.dim());
    for (m, c) in poly.terms() {
        let e = if conjugate { m.beta[j] } else { m.alpha[j] };
        if e == 0 {
            continue;
        }
        let mut m2 = m.clone();
        if conjugate {
            m2.beta[j] -= 1;
        } else {
            m2.alpha[j] -= 1;
        }
        out.add_term(m2, c.clone() * C::from_integer(e as i64));
    }
    out
}

fn times_coordinate<C: Coeff>(poly: &BigradedPolynomial<C>, j: usize, conjugate: bool) -> BigradedPolynomial<C> {
    let mut out = BigradedPolynomial::zero(poly.dim());
    for (m, c) in poly.terms() {
        let mut m2 = m.clone();
        if conjugate {
            m2.beta[j] += 1;
        } else {
            m2.alpha[j] += 1;
        }
        out.add_term(m2, c.clone());
    }
    out
}

/// `L_jk = z̄_j ∂_k − z̄_k ∂_j`, or with `conjugate` the field
/// `L̄_jk = z_j ∂̄_k − z_k ∂̄_j`. Indices are 1-based.
pub fn apply_l<C: Coeff>(poly: &BigradedPolynomial<C>, j: usize, k: usize, conjugate: bool) -> Result<BigradedPolynomial<C>> {
    check_index(poly.dim(), j)?;
    check_index(poly.dim(), k)?;
    Ok(l_field(poly, j - 1, k - 1, conjugate))
}

fn l_field<C: Coeff>(poly: &BigradedPolynomial<C>, j: usize, k: usize, conjugate: bool) -> BigradedPolynomial<C> {
    if j == k {
        return BigradedPolynomial::zero(poly.dim());
    }
    // multiply by the opposite-type coordinate, differentiate in the same type
    let a = times_coordinate(&derivative(poly, k, conjugate), j, !conjugate);
    let b = times_coordinate(&derivative(poly, j, conjugate), k, !conjugate);
    &a - &b
}

/// Multiplies every monomial by an integer computed from its exponents.
fn diagonal<C: Coeff>(poly: &BigradedPolynomial<C>, f: impl Fn(&MultiIndexPair) -> i64) -> BigradedPolynomial<C> {
    let mut out = BigradedPolynomial::zero(poly.dim());
    for (m, c) in poly.terms() {
        out.add_term(m.clone(), c.clone() * C::from_integer(f(m)));
    }
    out
}

/// `R = Σ (z_j ∂_j − z̄_j ∂̄_j)`; acts as `p − q` on bidegree `(p, q)`.
pub fn apply_r<C: Coeff>(poly: &BigradedPolynomial<C>) -> BigradedPolynomial<C> {
    diagonal(poly, |m| {
        let (p, q) = m.bidegree();
        p as i64 - q as i64
    })
}

/// `N = Σ (z_j ∂_j + z̄_j ∂̄_j)`, the real radial derivative `r d/dr`.
pub fn apply_n<C: Coeff>(poly: &BigradedPolynomial<C>) -> BigradedPolynomial<C> {
    diagonal(poly, |m| {
        let (p, q) = m.bidegree();
        (p + q) as i64
    })
}

/// `□ = −Σ_{j,k} (L_jk L̄_jk + L̄_jk L_jk)`.
pub fn apply_box<C: Coeff>(poly: &BigradedPolynomial<C>) -> BigradedPolynomial<C> {
    let n = poly.dim();
    let mut acc = BigradedPolynomial::zero(n);
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            acc = &acc + &l_field(&l_field(poly, j, k, true), j, k, false);
            acc = &acc + &l_field(&l_field(poly, j, k, false), j, k, true);
        }
    }
    -&acc
}

/// Euclidean Laplacian `4 Σ ∂_j ∂̄_j`.
pub fn laplacian<C: Coeff>(poly: &BigradedPolynomial<C>) -> BigradedPolynomial<C> {
    let mut acc = BigradedPolynomial::zero(poly.dim());
    for j in 0..poly.dim() {
        acc = &acc + &derivative(&derivative(poly, j, true), j, false);
    }
    acc.scale_int(4)
}

/// Invariant Laplacian `4(1−|z|²) Σ (δ_jk − z_j z̄_k) ∂_j ∂̄_k`.
pub fn invariant_laplacian<C: Coeff>(poly: &BigradedPolynomial<C>) -> BigradedPolynomial<C> {
    let n = poly.dim();
    let flat = laplacian(poly);
    // Σ z_j z̄_k ∂_j ∂̄_k is diagonal: |α||β| on z^α z̄^β
    let radial = diagonal(poly, |m| {
        let (p, q) = m.bidegree();
        4 * p as i64 * q as i64
    });
    let inner = &flat - &radial;
    let weight = &BigradedPolynomial::constant(n, C::one()) - &BigradedPolynomial::norm_squared(n);
    &weight * &inner
}

/// One of the first-order fields tangent to the spheres `|z| = r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TangentialField {
    /// The complex normal derivative `R`, tangent since `R|z|² = 0`.
    Normal,
    /// `L_jk` with 1-based indices.
    L { j: usize, k: usize },
    /// `L̄_jk` with 1-based indices.
    LBar { j: usize, k: usize },
}

impl TangentialField {
    pub fn apply<C: Coeff>(&self, poly: &BigradedPolynomial<C>) -> Result<BigradedPolynomial<C>> {
        match *self {
            TangentialField::Normal => Ok(apply_r(poly)),
            TangentialField::L { j, k } => apply_l(poly, j, k, false),
            TangentialField::LBar { j, k } => apply_l(poly, j, k, true),
        }
    }

    /// Adjoint in `L²(sphere)`: `L_jk* = −L̄_jk`, `L̄_jk* = −L_jk`, `R* = R`.
    pub fn adjoint(&self) -> (i64, TangentialField) {
        match *self {
            TangentialField::Normal => (1, TangentialField::Normal),
            TangentialField::L { j, k } => (-1, TangentialField::LBar { j, k }),
            TangentialField::LBar { j, k } => (-1, TangentialField::L { j, k }),
        }
    }
}

/// The `2n²` fields `L_jk`, `L̄_jk` over all ordered pairs (including the
/// vanishing `j = k` ones), preceded by `R` when `with_normal` is set.
pub fn tangential_fields(n: usize, with_normal: bool) -> Vec<TangentialField> {
    let mut out = Vec::with_capacity(2 * n * n + 1);
    if with_normal {
        out.push(TangentialField::Normal);
    }
    for j in 1..=n {
        for k in 1..=n {
            out.push(TangentialField::L { j, k });
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            out.push(TangentialField::LBar { j, k });
        }
    }
    out
}

/// `Σ_X X*X` over [`tangential_fields`], the operator whose quadratic form
/// is `Σ_X ‖X g‖²` on the sphere. Without `R` this is `□`; with it, `□ + R²`.
pub fn tangential_sum_of_squares<C: Coeff>(poly: &BigradedPolynomial<C>, with_normal: bool) -> Result<BigradedPolynomial<C>> {
    let mut acc = BigradedPolynomial::zero(poly.dim());
    for x in tangential_fields(poly.dim(), with_normal) {
        let (sign, adj) = x.adjoint();
        let term = adj.apply(&x.apply(poly)?)?;
        acc = &acc + &term.scale_int(sign);
    }
    Ok(acc)
}

/// Eigenvalue of `□` on bidegree `(p, q)`: `4pq + (2n−2)(p+q)`.
pub fn box_eigenvalue(n: u32, p: u32, q: u32) -> u64 {
    let (n, p, q) = (n as u64, p as u64, q as u64);
    4 * p * q + (2 * n - 2) * (p + q)
}

/// Eigenvalue of `□ + R²` on bidegree `(p, q)`: `(p+q)(p+q+2n−2)`.
pub fn sphere_laplacian_eigenvalue(n: u32, p: u32, q: u32) -> u64 {
    let (n, d) = (n as u64, (p + q) as u64);
    d * (d + 2 * n - 2)
}

/// Split of the `□` eigenvalue on bidegree `(p, q)` into the part carried
/// by the `L` fields and by the `L̄` fields:
/// `(Σ‖L_jk h‖², Σ‖L̄_jk h‖²) = (2p(q+n−1), 2q(p+n−1))·‖h‖²`.
pub fn l_family_weights(n: u32, p: u32, q: u32) -> (u64, u64) {
    let (n, p, q) = (n as u64, p as u64, q as u64);
    if n == 0 {
        return (0, 0);
    }
    (2 * p * (q + n - 1), 2 * q * (p + n - 1))
}

/// `Σ ‖X_{j₁}⋯X_{j_m} h‖² / ‖h‖²` on the sphere for harmonic `h` of
/// bidegree `(p, q)`, over [`tangential_fields`].
///
/// `L_jk` moves `(p, q)` to `(p−1, q+1)` and `L̄_jk` to `(p+1, q−1)`, so the
/// fields do not commute with `□` and the value is a walk over bidegrees.
/// It equals the `m`-th power of [`box_eigenvalue`] only for `m ≤ 1`. With
/// `R` included the degree `p+q` fixes the one-step weight, and the value
/// is exactly the `m`-th power of [`sphere_laplacian_eigenvalue`].
pub fn iterated_tangential_weight(n: u32, p: u32, q: u32, m: u32, with_normal: bool) -> u128 {
    if m == 0 {
        return 1;
    }
    let (wl, wlb) = l_family_weights(n, p, q);
    let mut acc = 0u128;
    if wl > 0 {
        acc += wl as u128 * iterated_tangential_weight(n, p - 1, q + 1, m - 1, with_normal);
    }
    if wlb > 0 {
        acc += wlb as u128 * iterated_tangential_weight(n, p + 1, q - 1, m - 1, with_normal);
    }
    if with_normal {
        let d = p.abs_diff(q) as u128;
        acc += d * d * iterated_tangential_weight(n, p, q, m - 1, with_normal);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{exact, ExactComplex};

    type P = BigradedPolynomial<ExactComplex>;

    fn mono(n: usize, a: &[u32], b: &[u32]) -> P {
        P::monomial(n, a, b, exact(1, 0)).unwrap()
    }

    #[test]
    fn wirtinger_examples() {
        let z1sq = mono(2, &[2, 0], &[0, 0]);
        assert_eq!(wirtinger(&z1sq, 1, false).unwrap(), mono(2, &[1, 0], &[0, 0]).scale_int(2));
        assert!(wirtinger(&mono(2, &[1, 0], &[0, 0]), 1, true).unwrap().is_zero());
        assert_eq!(wirtinger(&mono(2, &[1, 0], &[0, 1]), 1, false).unwrap(), mono(2, &[0, 0], &[0, 1]));
        assert!(wirtinger(&z1sq, 3, false).is_err());
    }

    #[test]
    fn l_field_examples() {
        let z1 = mono(2, &[1, 0], &[0, 0]);
        let z2 = mono(2, &[0, 1], &[0, 0]);
        assert_eq!(apply_l(&z1, 1, 2, false).unwrap(), -&mono(2, &[0, 0], &[0, 1]));
        assert_eq!(apply_l(&z2, 1, 2, false).unwrap(), mono(2, &[0, 0], &[1, 0]));
        assert_eq!(apply_l(&mono(2, &[0, 0], &[0, 1]), 1, 2, true).unwrap(), mono(2, &[1, 0], &[0, 0]));
        assert!(apply_l(&z1, 1, 1, false).unwrap().is_zero());
        assert!(apply_l(&z1, 0, 1, false).is_err());
    }

    #[test]
    fn l_fields_kill_radial_functions() {
        let r2 = P::norm_squared(3);
        for x in tangential_fields(3, true) {
            assert!(x.apply(&r2).unwrap().is_zero(), "{x:?}");
        }
    }

    #[test]
    fn r_and_n_examples() {
        let m = mono(2, &[2, 0], &[0, 1]);
        assert_eq!(apply_r(&m), m);
        let m = mono(2, &[1, 0], &[0, 1]);
        assert_eq!(apply_n(&m), m.scale_int(2));
        assert!(apply_r(&P::constant(2, exact(5, 0))).is_zero());
    }

    #[test]
    fn box_examples() {
        let m = mono(2, &[1, 0], &[0, 1]);
        assert_eq!(apply_box(&m), m.scale_int(8));
        for p in 0..5u32 {
            let zp = mono(2, &[p, 0], &[0, 0]);
            assert_eq!(apply_box(&zp), zp.scale_int(2 * p as i64));
        }
        assert!(apply_box(&P::constant(2, exact(1, 0))).is_zero());
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(laplacian(&mono(2, &[1, 0], &[1, 0])), P::constant(2, exact(4, 0)));
        assert!(laplacian(&mono(2, &[3, 0], &[0, 2])).is_zero());
        assert_eq!(laplacian(&P::norm_squared(3)), P::constant(3, exact(12, 0)));
    }

    #[test]
    fn invariant_laplacian_kills_holomorphic() {
        let m = mono(2, &[2, 1], &[0, 0]);
        assert!(invariant_laplacian(&m).is_zero());
        // Δ̃|z|² = 4(1−|z|²)(n − |z|²)
        let r2 = P::norm_squared(2);
        let one = P::constant(2, exact(1, 0));
        let expected = (&(&one - &r2) * &(&one.scale_int(2) - &r2)).scale_int(4);
        assert_eq!(invariant_laplacian(&r2), expected);
    }

    #[test]
    fn sum_of_squares_without_normal_is_box() {
        let m = mono(3, &[1, 2, 0], &[0, 0, 1]);
        assert_eq!(tangential_sum_of_squares(&m, false).unwrap(), apply_box(&m));
        let with = tangential_sum_of_squares(&m, true).unwrap();
        assert_eq!(with, &apply_box(&m) + &apply_r(&apply_r(&m)));
        assert_eq!(tangential_fields(3, false).len(), 18);
        assert_eq!(tangential_fields(3, true).len(), 19);
    }

    #[test]
    fn eigenvalue_formulas() {
        assert_eq!(box_eigenvalue(2, 1, 1), 8);
        for n in 2..5 {
            for p in 0..7 {
                for q in 0..7 {
                    let pm = p as i64 - q as i64;
                    assert_eq!(
                        sphere_laplacian_eigenvalue(n, p, q) as i64,
                        box_eigenvalue(n, p, q) as i64 + pm * pm
                    );
                }
            }
        }
    }

    #[test]
    fn l_family_split_is_exact() {
        use crate::algebra::{harmonic_decompose, BigradedPolynomial};
        // harmonic part of z₁²z₂ z̄₁z̄₃ in C³, bidegree (3, 2)
        let poly = mono(3, &[2, 1, 0], &[1, 0, 1]);
        let (_, h) = harmonic_decompose(&poly).unwrap().remove(0);
        let n = 3;
        let mut minus_lbar_l = BigradedPolynomial::zero(n);
        let mut minus_l_lbar = BigradedPolynomial::zero(n);
        for j in 1..=n {
            for k in 1..=n {
                let a = apply_l(&apply_l(&h, j, k, false).unwrap(), j, k, true).unwrap();
                let b = apply_l(&apply_l(&h, j, k, true).unwrap(), j, k, false).unwrap();
                minus_lbar_l = &minus_lbar_l - &a;
                minus_l_lbar = &minus_l_lbar - &b;
            }
        }
        let (wl, wlb) = l_family_weights(3, 3, 2);
        assert_eq!(minus_lbar_l, h.scale_int(wl as i64));
        assert_eq!(minus_l_lbar, h.scale_int(wlb as i64));
        assert_eq!(wl + wlb, box_eigenvalue(3, 3, 2));
    }

    #[test]
    fn iterated_weights() {
        // m = 1 is the eigenvalue, m = 2 is not its square
        assert_eq!(iterated_tangential_weight(2, 1, 1, 1, false), 8);
        assert_eq!(iterated_tangential_weight(2, 1, 1, 2, false), 32);
        assert_eq!(iterated_tangential_weight(2, 0, 2, 2, false), 32);
        for n in 2..5 {
            for p in 0..6 {
                for q in 0..6 {
                    let sigma = sphere_laplacian_eigenvalue(n, p, q) as u128;
                    for m in 0..4 {
                        assert_eq!(iterated_tangential_weight(n, p, q, m, true), sigma.pow(m));
                    }
                }
            }
        }
    }
}
