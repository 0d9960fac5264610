use num_complex::Complex64;

use super::MhFunction;
use crate::algebra::{invariant_laplacian, BigradedPolynomial, Coeff};
use crate::error::{Error, Result};

impl MhFunction {
    /// Taylor coefficients `a_0..=a_K` of the normalized profile
    /// `S_pq(t) = Σ a_k t^k`.
    pub fn profile_taylor(&self, p: u32, q: u32, k_max: u32) -> Vec<f64> {
        let mut out = Vec::with_capacity(k_max as usize + 1);
        if p == 0 || q == 0 {
            out.push(1.0);
            out.resize(k_max as usize + 1, 0.0);
            return out;
        }
        let (a, b, c) = (p as f64, q as f64, (p + q) as f64 + self.n as f64);
        let norm = crate::radial::RadialProfile { n: self.n as f64, p, q }.normalization();
        let mut term = norm;
        for k in 0..=k_max {
            out.push(term);
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        }
        out
    }

    /// `Σ_pq Σ_{k ≤ K} a_k |z|^{2k} h_pq`: each profile cut after its
    /// `t^K` term. Holomorphic and antiholomorphic parts are exact.
    pub fn truncate_to_polynomial(&self, k_max: u32) -> BigradedPolynomial<Complex64> {
        let n = self.n;
        let r2 = BigradedPolynomial::<Complex64>::norm_squared(n);
        let mut out = BigradedPolynomial::zero(n);
        for c in &self.components {
            let h = c.h.to_complex64().scale(&Complex64::new(self.component_scale(c.p, c.q), 0.0));
            let coeffs = self.profile_taylor(c.p, c.q, k_max);
            let mut shell = h;
            for (k, &a) in coeffs.iter().enumerate() {
                if a != 0.0 {
                    out = &out + &shell.scale(&Complex64::new(a, 0.0));
                }
                if k < coeffs.len() - 1 && coeffs[k + 1..].iter().any(|&x| x != 0.0) {
                    shell = &shell * &r2;
                } else {
                    break;
                }
            }
        }
        out
    }

    /// Bound on `sup_{|z| ≤ r₀} |f − truncate_to_polynomial(f, K)|`.
    pub fn truncation_tail_bound(&self, k_max: u32, r0: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r0) {
            return Err(Error::domain(format!("radius r₀ = {r0} must lie in [0, 1)")));
        }
        let t = r0 * r0;
        let mut total = 0.0;
        for c in &self.components {
            if c.p == 0 || c.q == 0 {
                continue;
            }
            let sup_h: f64 = c.h.terms().map(|(_, v)| v.to_complex64().norm()).sum::<f64>() * r0.powi((c.p + c.q) as i32);
            // tail of Σ a_k t^k; terms eventually decay like t^k
            let (a, b, cc) = (c.p as f64, c.q as f64, (c.p + c.q) as f64 + self.n as f64);
            let mut term = self.profile_taylor(c.p, c.q, k_max)[k_max as usize] * t.powi(k_max as i32);
            let mut tail = 0.0;
            let mut k = k_max as f64;
            loop {
                term *= (a + k) * (b + k) / ((cc + k) * (k + 1.0)) * t;
                k += 1.0;
                tail += term;
                if term <= 1e-18 * tail || k > 1e7 {
                    break;
                }
            }
            total += self.component_scale(c.p, c.q) * sup_h * tail;
        }
        Ok(total)
    }

    /// `max |Δ̃ P_K(z)|` over `points`, with `P_K` the truncation at order
    /// `K` and `Δ̃` applied symbolically.
    pub fn mharmonicity_residual(&self, k_max: u32, points: &[Vec<Complex64>]) -> Result<f64> {
        let lap = invariant_laplacian(&self.truncate_to_polynomial(k_max));
        let mut worst = 0.0f64;
        for z in points {
            if z.iter().map(|c| c.norm_sqr()).sum::<f64>() >= 1.0 {
                return Err(Error::domain("residual sample outside the open ball"));
            }
            worst = worst.max(lap.evaluate(z)?.norm());
        }
        Ok(worst)
    }
}
