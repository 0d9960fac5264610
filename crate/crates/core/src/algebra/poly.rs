use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::coeff::{Coeff, ExactComplex};
use crate::error::{Error, Result};

/// Exponents of `z` (`alpha`) and of `z̄` (`beta`) in one monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndexPair {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl MultiIndexPair {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::Invalid(format!(
                "exponent lengths differ: {} for z, {} for z̄",
                alpha.len(),
                beta.len()
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn constant(n: usize) -> Self {
        Self { alpha: vec![0; n], beta: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `(|alpha|, |beta|)`.
    pub fn bidegree(&self) -> (u32, u32) {
        (self.alpha.iter().sum(), self.beta.iter().sum())
    }
}

/// Sparse polynomial in `z, z̄ ∈ Cⁿ`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct BigradedPolynomial<C: Coeff = ExactComplex> {
    n: usize,
    terms: BTreeMap<MultiIndexPair, C>,
}

impl<C: Coeff> BigradedPolynomial<C> {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut out = Self::zero(n);
        out.add_term(MultiIndexPair::constant(n), c);
        out
    }

    pub fn monomial(n: usize, alpha: &[u32], beta: &[u32], c: C) -> Result<Self> {
        if alpha.len() != n || beta.len() != n {
            return Err(Error::Invalid(format!("monomial exponents must have length n = {n}")));
        }
        let mut out = Self::zero(n);
        out.add_term(MultiIndexPair::new(alpha.to_vec(), beta.to_vec())?, c);
        Ok(out)
    }

    /// The coordinate `z_j` (or `z̄_j`), `1 ≤ j ≤ n`.
    pub fn coordinate(n: usize, j: usize, conjugate: bool) -> Result<Self> {
        check_index(n, j)?;
        let mut e = vec![0; n];
        e[j - 1] = 1;
        let zero = vec![0; n];
        if conjugate {
            Self::monomial(n, &zero, &e, C::one())
        } else {
            Self::monomial(n, &e, &zero, C::one())
        }
    }

    /// `|z|² = Σ z_j z̄_j`.
    pub fn norm_squared(n: usize) -> Self {
        let mut out = Self::zero(n);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            out.add_term(MultiIndexPair { alpha: e.clone(), beta: e }, C::one());
        }
        out
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndexPair, C)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (m, c) in terms {
            if m.dim() != n {
                return Err(Error::Invalid(format!("monomial of dimension {} in a polynomial over C^{n}", m.dim())));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndexPair, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndexPair) -> Option<&C> {
        self.terms.get(m)
    }

    /// Adds `c` to the coefficient of `m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: MultiIndexPair, c: C) {
        debug_assert_eq!(m.dim(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Common `(p, q)` of all terms, or `None` for mixed or zero input.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(MultiIndexPair::bidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&C::from_integer(k))
    }

    /// Complex conjugate: swaps the roles of `z` and `z̄`.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (MultiIndexPair { alpha: m.beta.clone(), beta: m.alpha.clone() }, c.conj()));
        let mut out = Self::zero(self.n);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BigradedPolynomial<D> {
        let mut out = BigradedPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex64(&self) -> BigradedPolynomial<Complex64> {
        self.map_coeffs(C::to_complex64)
    }

    /// Value at `z` (with `z̄` taken as the conjugate of `z`).
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::Invalid(format!("point of dimension {} for a polynomial over C^{}", z.len(), self.n)));
        }
        let (da, db) = self.max_exponents();
        let zp = power_table(z, da, false);
        let zb = power_table(z, db, true);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex64();
            for j in 0..self.n {
                v *= zp[j][m.alpha[j] as usize] * zb[j][m.beta[j] as usize];
            }
            acc += v;
        }
        Ok(acc)
    }

    fn max_exponents(&self) -> (usize, usize) {
        self.terms.keys().fold((0, 0), |(a, b), m| {
            (
                a.max(m.alpha.iter().copied().max().unwrap_or(0) as usize),
                b.max(m.beta.iter().copied().max().unwrap_or(0) as usize),
            )
        })
    }

    fn check_same_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "polynomials over C^{} and C^{} cannot be combined", self.n, other.n);
    }
}

fn power_table(z: &[Complex64], max: usize, conjugate: bool) -> Vec<Vec<Complex64>> {
    z.iter()
        .map(|&zj| {
            let base = if conjugate { zj.conj() } else { zj };
            let mut row = Vec::with_capacity(max + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=max {
                row.push(acc);
                acc *= base;
            }
            row
        })
        .collect()
}

pub(crate) fn check_index(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::Invalid(format!("index {j} outside 1..={n}")));
    }
    Ok(())
}

impl<C: Coeff> Add for &BigradedPolynomial<C> {
    type Output = BigradedPolynomial<C>;

    fn add(self, rhs: Self) -> Self::Output {
        self.check_same_dim(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &BigradedPolynomial<C> {
    type Output = BigradedPolynomial<C>;

    fn sub(self, rhs: Self) -> Self::Output {
        self.check_same_dim(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &BigradedPolynomial<C> {
    type Output = BigradedPolynomial<C>;

    fn mul(self, rhs: Self) -> Self::Output {
        self.check_same_dim(rhs);
        let mut out = BigradedPolynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let alpha = ma.alpha.iter().zip(&mb.alpha).map(|(a, b)| a + b).collect();
                let beta = ma.beta.iter().zip(&mb.beta).map(|(a, b)| a + b).collect();
                out.add_term(MultiIndexPair { alpha, beta }, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &BigradedPolynomial<C> {
    type Output = BigradedPolynomial<C>;

    fn neg(self) -> Self::Output {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> $tr for BigradedPolynomial<C> {
            type Output = BigradedPolynomial<C>;

            fn $method(self, rhs: Self) -> Self::Output {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
