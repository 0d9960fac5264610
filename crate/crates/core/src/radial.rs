//! Radial profiles of the solid harmonics.
//!
//! For bidegree `(p, q)` in dimension `n` the profile is
//! `S(t) = ₂F₁(p, q; p+q+n; t) / ₂F₁(p, q; p+q+n; 1)`, normalized so that
//! `S(1) = 1`. The solid harmonic with boundary values `h` is
//! `S(|z|²)·h(z, z̄)`, and its radial factor is `r^{p+q} S(r²)`.
//!
//! Derivatives are taken with respect to `D = 2t d/dt`, which is the Euler
//! operator `r d/dr` written in `t = r²`.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_graded, Estimate};
use crate::specfun::{hyp2f1_tw, rising};

/// Below this `t` the derivatives come from the weighted Taylor series;
/// above it from contiguous hypergeometric functions.
const SERIES_MAX_T: f64 = 0.7;

/// Radial profile of bidegree `(p, q)`; `n` is real so that continuation in
/// the dimension parameter can be explored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    pub n: f64,
    pub p: u32,
    pub q: u32,
}

impl RadialProfile {
    pub fn new(n: f64, p: u32, q: u32) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::domain(format!("dimension parameter must be positive, got {n}")));
        }
        Ok(Self { n, p, q })
    }

    fn degree(&self) -> f64 {
        (self.p + self.q) as f64
    }

    fn pluriharmonic(&self) -> bool {
        self.p == 0 || self.q == 0
    }

    /// `(n)_p (n)_q / (n)_{p+q} = S(0)`, the reciprocal of `₂F₁(…; 1)`.
    pub fn normalization(&self) -> f64 {
        if self.pluriharmonic() {
            return 1.0;
        }
        // (n)_q / (n+p)_q as a product of ratios
        let (n, p) = (self.n, self.p as f64);
        (0..self.q).map(|i| (n + i as f64) / (n + p + i as f64)).product()
    }

    /// Parameters `(p, q, p+q+n)` of the underlying hypergeometric function.
    pub fn hyp_params(&self) -> (f64, f64, f64) {
        (self.p as f64, self.q as f64, self.degree() + self.n)
    }

    /// `S(t)` for `t ∈ [0, 1]`.
    pub fn s_pq(&self, t: f64) -> Result<f64> {
        check_closed_unit(t)?;
        self.s_pq_tw(t, 1.0 - t)
    }

    pub(crate) fn s_pq_tw(&self, t: f64, w: f64) -> Result<f64> {
        if self.pluriharmonic() || w == 0.0 {
            return Ok(1.0);
        }
        let (a, b, c) = self.hyp_params();
        Ok(self.normalization() * hyp2f1_tw(a, b, c, t, w)?)
    }

    /// `r^{p+q} S(r²)` for `r ∈ [0, 1]`.
    pub fn radial_factor(&self, r: f64) -> Result<f64> {
        check_closed_unit(r)?;
        if self.p + self.q == 0 {
            return Ok(1.0);
        }
        let t = r * r;
        Ok(r.powi((self.p + self.q) as i32) * self.s_pq_tw(t, (1.0 - r) * (1.0 + r))?)
    }

    /// `D^k (t^{(p+q)/2} S(t))` for `t ∈ (0, 1)`.
    pub fn radial_k_derivative(&self, k: u32, t: f64) -> Result<f64> {
        Ok(self.radial_k_derivatives(k, t)?[k as usize])
    }

    /// `D^j (t^{(p+q)/2} S(t))` for `j = 0..=kmax`.
    pub fn radial_k_derivatives(&self, kmax: u32, t: f64) -> Result<Vec<f64>> {
        check_open_unit(t)?;
        let mut v = self.unnormalized_derivatives_tw(kmax, t, 1.0 - t)?;
        let c = self.normalization();
        v.iter_mut().for_each(|x| *x *= c);
        Ok(v)
    }

    /// `D^j (t^{(p+q)/2} ₂F₁(p, q; p+q+n; t))` for `j = 0..=kmax`, without
    /// the normalization factor.
    pub fn unnormalized_derivatives(&self, kmax: u32, t: f64) -> Result<Vec<f64>> {
        check_open_unit(t)?;
        self.unnormalized_derivatives_tw(kmax, t, 1.0 - t)
    }

    pub(crate) fn unnormalized_derivatives_tw(&self, kmax: u32, t: f64, w: f64) -> Result<Vec<f64>> {
        let d = self.degree();
        let half = 0.5 * d;
        let base = if d == 0.0 { 1.0 } else { (half * t.ln()).exp() };
        let len = kmax as usize + 1;
        if self.pluriharmonic() {
            return Ok((0..len).map(|k| d.powi(k as i32) * base).collect());
        }
        let (a, b, c) = self.hyp_params();
        if t <= SERIES_MAX_T {
            return weighted_series(a, b, c, d, t, len).map(|v| v.into_iter().map(|x| base * x).collect());
        }
        // D^k (t^α F) = 2^k t^α Σ_i C(k,i) α^{k−i} θ^i F, with
        // θ^i = Σ_j S(i,j) t^j (d/dt)^j and (d/dt)^j F a contiguous ₂F₁.
        let mut contiguous = Vec::with_capacity(len);
        for j in 0..len {
            let jf = j as f64;
            let pre = rising(a, j as u32) * rising(b, j as u32) / rising(c, j as u32);
            contiguous.push(pre * t.powi(j as i32) * hyp2f1_tw(a + jf, b + jf, c + jf, t, w)?);
        }
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let mut sum = 0.0;
            for (j, cj) in contiguous.iter().enumerate().take(k + 1) {
                sum += euler_coefficient(k, j, half) * cj;
            }
            out.push(2f64.powi(k as i32) * base * sum);
        }
        Ok(out)
    }

    /// Residual of the radial equation satisfied by `u(r) = r^{p+q} S(r²)`:
    ///
    /// `(1−r²)u″ + ((2n−1)/r − r)u′ + ((p−q)² − (p+q)(p+q+2n−2)/r²)u = 0`,
    ///
    /// returned relative to the largest of the three groups of terms.
    pub fn ode_residual(&self, r: f64) -> Result<f64> {
        check_open_unit(r)?;
        let (a, b, c) = self.hyp_params();
        let t = r * r;
        let w = (1.0 - r) * (1.0 + r);
        let f0 = hyp2f1_tw(a, b, c, t, w)?;
        let f1 = a * b / c * hyp2f1_tw(a + 1.0, b + 1.0, c + 1.0, t, w)?;
        let f2 = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) * hyp2f1_tw(a + 2.0, b + 2.0, c + 2.0, t, w)?;
        let d = self.degree();
        let pw = |e: f64| r.powf(e);
        let u = pw(d) * f0;
        let du = d * pw(d - 1.0) * f0 + 2.0 * pw(d + 1.0) * f1;
        let ddu = d * (d - 1.0) * pw(d - 2.0) * f0 + (4.0 * d + 2.0) * pw(d) * f1 + 4.0 * pw(d + 2.0) * f2;
        let n = self.n;
        let pq = self.p as f64 - self.q as f64;
        let terms = [
            w * ddu,
            ((2.0 * n - 1.0) / r - r) * du,
            (pq * pq - d * (d + 2.0 * n - 2.0) / (r * r)) * u,
        ];
        let scale = terms.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(terms.iter().sum::<f64>().abs() / scale)
    }
}

fn check_closed_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain(format!("argument {t} outside [0, 1]")))
    }
}

fn check_open_unit(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("argument {t} outside (0, 1)")))
    }
}

/// `Σ_j (a)_j (b)_j / (j! (c)_j) (d + 2j)^k t^j` for `k < len`.
fn weighted_series(a: f64, b: f64, c: f64, d: f64, t: f64, len: usize) -> Result<Vec<f64>> {
    let mut sums = vec![0.0; len];
    let mut term = 1.0;
    for j in 0..crate::specfun::ITERATION_CAP {
        let jf = j as f64;
        let m = d + 2.0 * jf;
        let mut wk = term;
        let mut last = 0.0;
        for s in sums.iter_mut() {
            *s += wk;
            last = wk;
            wk *= m;
        }
        let ratio = (a + jf) * (b + jf) / ((jf + 1.0) * (c + jf)) * t;
        if j > 2 && last.abs() <= 1e-17 * sums[len - 1].abs() && ratio < 1.0 {
            return Ok(sums);
        }
        term *= ratio;
    }
    Err(Error::non_convergence("weighted radial series"))
}

/// `Σ_{i=j}^{k} C(k,i) α^{k−i} S(i,j)` with `S` the Stirling numbers of the
/// second kind.
fn euler_coefficient(k: usize, j: usize, alpha: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for i in 0..=k {
        if i > 0 {
            binom = binom * (k - i + 1) as f64 / i as f64;
        }
        if i >= j {
            sum += binom * alpha.powi((k - i) as i32) * stirling2(i, j);
        }
    }
    sum
}

fn stirling2(i: usize, j: usize) -> f64 {
    let mut row = vec![0.0f64; j + 1];
    row[0] = 1.0;
    for m in 1..=i {
        for r in (1..=j.min(m)).rev() {
            row[r] = r as f64 * row[r] + row[r - 1];
        }
        row[0] = 0.0;
    }
    row[j]
}

/// `∫₀¹ t^{p+q+n−1+k} (1−t)^s ₂F₁(p, q; p+q+n; t)² dt` with `n` real.
pub fn i_pqs(n_eff: f64, k: u32, p: u32, q: u32, s: f64, rel_tol: f64) -> Result<Estimate> {
    let d = (p + q) as f64;
    if !(d + n_eff > 0.0) {
        return Err(Error::domain(format!("p + q + n must be positive, got {}", d + n_eff)));
    }
    if !(s > -1.0) {
        return Err(Error::domain(format!("weight exponent s = {s} must exceed −1")));
    }
    let (a, b, c) = (p as f64, q as f64, d + n_eff);
    let beta = d + n_eff - 1.0 + k as f64;
    if p == 0 || q == 0 {
        return integrate_graded(|_, _| 1.0, s, beta, rel_tol);
    }
    let err = std::cell::Cell::new(None);
    let est = integrate_graded(
        |t, w| match hyp2f1_tw(a, b, c, t, w) {
            Ok(v) => v * v,
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        },
        s,
        beta,
        rel_tol,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    est
}
