use rand::Rng;

use super::{Component, MhFunction};
use crate::algebra::{exact, harmonic_decompose, BigradedPolynomial, ExactComplex, MultiIndexPair};
use crate::error::Result;

/// Random exponent vector of length `n` summing to `total`.
fn random_exponents<R: Rng + ?Sized>(rng: &mut R, n: usize, total: u32) -> Vec<u32> {
    let mut e = vec![0; n];
    for _ in 0..total {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// Bihomogeneous polynomial of bidegree `(p, q)` with `terms` random
/// monomials and small Gaussian-integer coefficients.
pub fn random_bihomogeneous<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    p: u32,
    q: u32,
    terms: usize,
) -> BigradedPolynomial<ExactComplex> {
    let mut out = BigradedPolynomial::zero(n);
    for _ in 0..terms {
        let m = MultiIndexPair { alpha: random_exponents(rng, n, p), beta: random_exponents(rng, n, q) };
        out.add_term(m, exact(rng.gen_range(-4..=4), rng.gen_range(-4..=4)));
    }
    out
}

/// Nonzero harmonic polynomial of bidegree `(p, q)`: the harmonic part of a
/// random bihomogeneous polynomial. For `n = 1` only `pq = 0` is possible.
pub fn random_harmonic<R: Rng + ?Sized>(rng: &mut R, n: usize, p: u32, q: u32) -> Result<BigradedPolynomial<ExactComplex>> {
    loop {
        let poly = random_bihomogeneous(rng, n, p, q, 3);
        if let Some((0, h)) = harmonic_decompose(&poly)?.into_iter().next() {
            return Ok(h);
        }
    }
}

/// Sum of `count` solid harmonics with distinct random bidegrees in
/// `[0, max_degree]²`.
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, n: usize, max_degree: u32, count: usize) -> Result<MhFunction> {
    let side = (max_degree + 1) as usize;
    let count = count.min(side * side);
    let mut picked: Vec<(u32, u32)> = Vec::with_capacity(count);
    while picked.len() < count {
        let pq = (rng.gen_range(0..=max_degree), rng.gen_range(0..=max_degree));
        if n == 1 && pq.0 * pq.1 != 0 {
            continue;
        }
        if !picked.contains(&pq) {
            picked.push(pq);
        }
    }
    let comps = picked
        .into_iter()
        .map(|(p, q)| Ok(Component { p, q, h: random_harmonic(rng, n, p, q)? }))
        .collect::<Result<Vec<_>>>()?;
    MhFunction::new(n, comps)
}
