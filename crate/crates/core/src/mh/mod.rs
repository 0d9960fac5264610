//! M-harmonic functions given as finite sums of solid harmonics
//! `f = Σ S_pq(|z|²) h_pq(z, z̄)`, their point values, polynomial
//! truncations, and the norms that are diagonal in the bidegree.

mod blowup;
mod geometry;
mod norms;
mod random;
mod spec;
mod truncate;

use num_complex::Complex64;

use crate::algebra::{box_eigenvalue, laplacian, sphere_norm_squared, BigradedPolynomial, ExactComplex};
use crate::error::{Error, Result};
use crate::radial::RadialProfile;

pub use blowup::{blowup_constant, blowup_profile, BLOWUP_R_MAX};
pub use geometry::{mean_value_residual, mean_value_residual_in, moebius, uniform_sphere_point, MeanValueCheck};
pub use norms::{
    diagonal_weights, norm_report, DiagonalWeights, NormReport, NORM_NAMES, NormValue, SobolevNorm, TangentialMode,
};
pub use random::{random_bihomogeneous, random_function, random_harmonic};
pub use spec::{ComponentSpec, FunctionSpec, TermSpec};

/// One solid harmonic `S_pq(|z|²) h(z, z̄)` with `h` harmonic of bidegree
/// `(p, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub p: u32,
    pub q: u32,
    pub h: BigradedPolynomial<ExactComplex>,
}

#[derive(Debug, Clone)]
struct FloatComponent {
    profile: RadialProfile,
    terms: Vec<(Vec<u32>, Vec<u32>, Complex64)>,
    max_exp: usize,
    sphere_norm_sq: f64,
}

/// A finite Peter–Weyl sum of solid harmonics, optionally acted on by
/// `(I+□)^τ`, which scales the `(p, q)` part by `(4pq+(2n−2)(p+q)+1)^τ`.
#[derive(Debug, Clone)]
pub struct MhFunction {
    n: usize,
    components: Vec<Component>,
    box_exponent: f64,
    float: Vec<FloatComponent>,
}

impl MhFunction {
    /// Validates that each `h` is harmonic with the stated bidegree and that
    /// no bidegree repeats. Zero components are dropped.
    pub fn new(n: usize, components: Vec<Component>) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("dimension n must be at least 1"));
        }
        let mut comps: Vec<Component> = Vec::with_capacity(components.len());
        for c in components {
            if c.h.dim() != n {
                return Err(Error::Invalid(format!(
                    "component ({}, {}) lives in C^{}, expected C^{n}",
                    c.p,
                    c.q,
                    c.h.dim()
                )));
            }
            if c.h.is_zero() {
                continue;
            }
            if c.h.bidegree() != Some((c.p, c.q)) {
                return Err(Error::Invalid(format!(
                    "component ({}, {}) is not bihomogeneous of that bidegree",
                    c.p, c.q
                )));
            }
            if !laplacian(&c.h).is_zero() {
                return Err(Error::Invalid(format!("component ({}, {}) is not harmonic", c.p, c.q)));
            }
            if comps.iter().any(|d| (d.p, d.q) == (c.p, c.q)) {
                return Err(Error::Invalid(format!("bidegree ({}, {}) appears twice", c.p, c.q)));
            }
            comps.push(c);
        }
        comps.sort_by_key(|c| (c.p, c.q));
        let float = comps.iter().map(|c| float_component(n, c)).collect::<Result<_>>()?;
        Ok(Self { n, components: comps, box_exponent: 0.0, float })
    }

    /// A single component.
    pub fn single(n: usize, p: u32, q: u32, h: BigradedPolynomial<ExactComplex>) -> Result<Self> {
        Self::new(n, vec![Component { p, q, h }])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Accumulated exponent `τ` of `(I+□)^τ`.
    pub fn box_exponent(&self) -> f64 {
        self.box_exponent
    }

    /// Factor `(4pq+(2n−2)(p+q)+1)^τ` applied to the `(p, q)` part.
    pub fn component_scale(&self, p: u32, q: u32) -> f64 {
        if self.box_exponent == 0.0 {
            return 1.0;
        }
        smoothing_eigenvalue(self.n, p, q).powf(self.box_exponent)
    }

    /// `‖f_pq‖²` on the sphere, including the `(I+□)^τ` factor, for each
    /// component in bidegree order.
    pub fn sphere_norms(&self) -> Vec<(u32, u32, f64)> {
        self.components
            .iter()
            .zip(&self.float)
            .map(|(c, fc)| {
                let s = self.component_scale(c.p, c.q);
                (c.p, c.q, s * s * fc.sphere_norm_sq)
            })
            .collect()
    }

    /// `f(0)`, the value of the `(0, 0)` component.
    pub fn value_at_origin(&self) -> Complex64 {
        self.components
            .iter()
            .find(|c| c.p == 0 && c.q == 0)
            .and_then(|c| c.h.terms().next().map(|(_, v)| crate::algebra::Coeff::to_complex64(v)))
            .unwrap_or_default()
    }

    /// `(I+□)^t f`; exponents add, so powers compose exactly.
    pub fn apply_box_power(&self, t: f64) -> MhFunction {
        let mut out = self.clone();
        out.box_exponent += t;
        out
    }

    /// `f(z) = Σ S_pq(|z|²) h_pq(z, z̄)` for `|z| < 1`.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::Invalid(format!("point of dimension {} in C^{}", z.len(), self.n)));
        }
        let t: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        if !(t < 1.0) {
            return Err(Error::domain(format!("point with |z|² = {t} is outside the open ball")));
        }
        let max_exp = self.float.iter().map(|c| c.max_exp).max().unwrap_or(0);
        let (zp, zb) = power_tables(z, max_exp);
        let w = 1.0 - t;
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, fc) in self.components.iter().zip(&self.float) {
            let mut h = Complex64::new(0.0, 0.0);
            for (a, b, coef) in &fc.terms {
                let mut v = *coef;
                for j in 0..self.n {
                    v *= zp[j * (max_exp + 1) + a[j] as usize] * zb[j * (max_exp + 1) + b[j] as usize];
                }
                h += v;
            }
            let radial = fc.profile.s_pq_tw(t, w)?;
            acc += h * (radial * self.component_scale(c.p, c.q));
        }
        Ok(acc)
    }
}

/// `4pq + (2n−2)(p+q) + 1`, the eigenvalue of `I + □` on bidegree `(p, q)`.
pub fn smoothing_eigenvalue(n: usize, p: u32, q: u32) -> f64 {
    box_eigenvalue(n as u32, p, q) as f64 + 1.0
}

fn float_component(n: usize, c: &Component) -> Result<FloatComponent> {
    let terms: Vec<_> = c
        .h
        .terms()
        .map(|(m, v)| (m.alpha.clone(), m.beta.clone(), crate::algebra::Coeff::to_complex64(v)))
        .collect();
    let max_exp = terms
        .iter()
        .flat_map(|(a, b, _)| a.iter().chain(b.iter()))
        .copied()
        .max()
        .unwrap_or(0) as usize;
    Ok(FloatComponent {
        profile: RadialProfile::new(n as f64, c.p, c.q)?,
        terms,
        max_exp,
        sphere_norm_sq: sphere_norm_squared(&c.h),
    })
}

fn power_tables(z: &[Complex64], max: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let stride = max + 1;
    let mut zp = vec![Complex64::new(1.0, 0.0); z.len() * stride];
    let mut zb = zp.clone();
    for (j, &zj) in z.iter().enumerate() {
        for e in 1..stride {
            zp[j * stride + e] = zp[j * stride + e - 1] * zj;
            zb[j * stride + e] = zb[j * stride + e - 1] * zj.conj();
        }
    }
    (zp, zb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::exact;

    fn mono(n: usize, a: &[u32], b: &[u32]) -> BigradedPolynomial<ExactComplex> {
        BigradedPolynomial::monomial(n, a, b, exact(1, 0)).unwrap()
    }

    #[test]
    fn constant_function_is_constant() {
        let f = MhFunction::single(2, 0, 0, BigradedPolynomial::constant(2, exact(3, -1))).unwrap();
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)];
        assert_eq!(f.evaluate(&z).unwrap(), Complex64::new(3.0, -1.0));
        assert_eq!(f.value_at_origin(), Complex64::new(3.0, -1.0));
    }

    #[test]
    fn holomorphic_component_has_flat_profile() {
        let f = MhFunction::single(2, 3, 0, mono(2, &[3, 0], &[0, 0])).unwrap();
        let z = [Complex64::new(0.4, 0.3), Complex64::new(0.1, -0.2)];
        let v = f.evaluate(&z).unwrap();
        assert!((v - z[0].powi(3)).norm() < 1e-15);
    }

    #[test]
    fn mixed_component_uses_the_radial_profile() {
        let f = MhFunction::single(2, 1, 1, mono(2, &[1, 0], &[0, 1])).unwrap();
        let z = [Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.0)];
        let s = RadialProfile::new(2.0, 1, 1).unwrap().s_pq(0.34).unwrap();
        // closed form: S_11(t) = (2/3) ₂F₁(1,1;4;t); mpmath gives S_11(0.34) = 0.7326749129707731
        assert!((s - 0.732_674_912_970_773_1).abs() < 1e-14);
        assert!((f.evaluate(&z).unwrap() - Complex64::new(s * 0.15, 0.0)).norm() < 1e-15);
        assert!(f.evaluate(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn validation_rejects_bad_components() {
        assert!(MhFunction::single(2, 1, 1, mono(2, &[1, 0], &[1, 0])).is_err());
        assert!(MhFunction::single(2, 2, 1, mono(2, &[1, 0], &[0, 1])).is_err());
        let h = mono(2, &[1, 0], &[0, 0]);
        let dup = vec![Component { p: 1, q: 0, h: h.clone() }, Component { p: 1, q: 0, h }];
        assert!(MhFunction::new(2, dup).is_err());
    }

    #[test]
    fn box_power_scales_and_composes() {
        let f = MhFunction::single(2, 1, 1, mono(2, &[1, 0], &[0, 1])).unwrap();
        assert_eq!(f.apply_box_power(1.0).component_scale(1, 1), 9.0);
        assert_eq!(f.apply_box_power(0.5).apply_box_power(0.5).component_scale(1, 1), 9.0);
        assert_eq!(f.apply_box_power(0.0).component_scale(1, 1), 1.0);
        let z = [Complex64::new(0.2, 0.1), Complex64::new(0.1, 0.3)];
        let a = f.apply_box_power(1.0).evaluate(&z).unwrap();
        let b = f.evaluate(&z).unwrap() * 9.0;
        assert!((a - b).norm() < 1e-15);
    }
}
