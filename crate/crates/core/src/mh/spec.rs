use serde::{Deserialize, Serialize};

use super::{Component, MhFunction};
use crate::algebra::{exact_from_f64, BigradedPolynomial, Coeff, MultiIndexPair};
use crate::error::{Error, Result};

/// Serializable description of an [`MhFunction`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub n: usize,
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub p: u32,
    pub q: u32,
    pub terms: Vec<TermSpec>,
}

/// `(re + i·im) z^alpha z̄^beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl FunctionSpec {
    /// Builds the function. Float coefficients are taken at their exact
    /// binary value, so harmonicity is checked without rounding.
    pub fn to_function(&self) -> Result<MhFunction> {
        let mut comps = Vec::with_capacity(self.components.len());
        for (i, c) in self.components.iter().enumerate() {
            let mut terms = Vec::with_capacity(c.terms.len());
            for t in &c.terms {
                if t.alpha.len() != self.n || t.beta.len() != self.n {
                    return Err(Error::Invalid(format!(
                        "component #{i} ({}, {}): exponent lists must have length n = {}",
                        c.p, c.q, self.n
                    )));
                }
                let coef = exact_from_f64(t.re, t.im)
                    .ok_or_else(|| Error::Invalid(format!("component #{i} ({}, {}): non-finite coefficient", c.p, c.q)))?;
                terms.push((MultiIndexPair::new(t.alpha.clone(), t.beta.clone())?, coef));
            }
            let h = BigradedPolynomial::from_terms(self.n, terms)?;
            comps.push(Component { p: c.p, q: c.q, h });
        }
        MhFunction::new(self.n, comps)
    }

    pub fn from_function(f: &MhFunction) -> Self {
        let components = f
            .components()
            .iter()
            .map(|c| ComponentSpec {
                p: c.p,
                q: c.q,
                terms: c
                    .h
                    .terms()
                    .map(|(m, v)| {
                        let z = v.to_complex64();
                        TermSpec { alpha: m.alpha.clone(), beta: m.beta.clone(), re: z.re, im: z.im }
                    })
                    .collect(),
            })
            .collect();
        Self { n: f.dim(), components }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(alpha: Vec<u32>, beta: Vec<u32>, re: f64) -> TermSpec {
        TermSpec { alpha, beta, re, im: 0.0 }
    }

    #[test]
    fn float_coefficients_cancel_exactly() {
        // 0.1·(z₁z̄₁ − z₂z̄₂) is harmonic only if both coefficients are the same binary value
        let spec = FunctionSpec {
            n: 2,
            components: vec![ComponentSpec {
                p: 1,
                q: 1,
                terms: vec![term(vec![0, 1], vec![0, 1], -0.1), term(vec![1, 0], vec![1, 0], 0.1)],
            }],
        };
        let f = spec.to_function().unwrap();
        // terms come back in monomial order, which this spec already uses
        assert_eq!(FunctionSpec::from_function(&f), spec);
    }

    #[test]
    fn non_harmonic_component_is_named() {
        let spec = FunctionSpec {
            n: 2,
            components: vec![ComponentSpec { p: 1, q: 1, terms: vec![term(vec![1, 0], vec![1, 0], 1.0)] }],
        };
        let err = spec.to_function().unwrap_err().to_string();
        assert!(err.contains("(1, 1)") && err.contains("not harmonic"), "{err}");
    }

    #[test]
    fn wrong_lengths_are_rejected() {
        let spec = FunctionSpec {
            n: 2,
            components: vec![ComponentSpec { p: 1, q: 0, terms: vec![term(vec![1], vec![0], 1.0)] }],
        };
        assert!(spec.to_function().is_err());
    }
}
