use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::MhFunction;
use crate::error::{Error, Result};
use crate::parallel::{try_par_map, ExecutionMode};

fn inner(w: &[Complex64], z: &[Complex64]) -> Complex64 {
    w.iter().zip(z).map(|(a, b)| a * b.conj()).sum()
}

/// The involutive automorphism of the ball exchanging `z` and `0`:
/// `φ_z(w) = (z − P_z w − √(1−|z|²) Q_z w) / (1 − ⟨w, z⟩)`, with `P_z` the
/// projection onto `Cz`, `Q_z = I − P_z`, and `φ_0(w) = −w`.
pub fn moebius(z: &[Complex64], w: &[Complex64]) -> Result<Vec<Complex64>> {
    if z.len() != w.len() {
        return Err(Error::Invalid(format!("points of dimensions {} and {}", z.len(), w.len())));
    }
    let zz: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    if !(zz < 1.0) {
        return Err(Error::domain(format!("centre with |z|² = {zz} is outside the open ball")));
    }
    if zz == 0.0 {
        return Ok(w.iter().map(|c| -c).collect());
    }
    let wz = inner(w, z);
    let den = Complex64::new(1.0, 0.0) - wz;
    if den.norm() < 1e-300 {
        return Err(Error::domain("⟨w, z⟩ = 1: the map is singular at this point"));
    }
    let sz = (1.0 - zz).sqrt();
    let proj = wz / zz;
    Ok(z.iter()
        .zip(w)
        .map(|(&zj, &wj)| {
            let pw = proj * zj;
            (zj - pw - sz * (wj - pw)) / den
        })
        .collect())
}

/// Uniform point on the unit sphere of `Cⁿ` from a normalized complex
/// Gaussian vector.
pub fn uniform_sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Outcome of a Monte Carlo check of the invariant mean-value property.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanValueCheck {
    /// `f(z)`.
    pub value: Complex64,
    /// Sample mean of `f(φ_z(rζ))`.
    pub mean: Complex64,
    /// `|f(z) − mean|`.
    pub residual: f64,
    /// Standard error of the mean, `√((Var Re + Var Im)/N)`.
    pub stderr: f64,
    pub samples: usize,
}

const CHUNK: usize = 1 << 14;

pub fn mean_value_residual(f: &MhFunction, z: &[Complex64], r: f64, samples: usize, seed: u64) -> Result<MeanValueCheck> {
    mean_value_residual_in(ExecutionMode::default(), f, z, r, samples, seed)
}

/// Compares `f(z)` with the sphere average of `f(φ_z(rζ))`. Chunk `i` of
/// the samples draws from stream `i` of a ChaCha generator seeded with
/// `seed`, so the result does not depend on `mode`.
pub fn mean_value_residual_in(
    mode: ExecutionMode,
    f: &MhFunction,
    z: &[Complex64],
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<MeanValueCheck> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("radius r = {r} must lie in (0, 1)")));
    }
    if samples < 2 {
        return Err(Error::precondition("at least two samples are needed"));
    }
    let value = f.evaluate(z)?;
    let n = f.dim();
    let chunks: Vec<(u64, usize)> =
        (0..samples.div_ceil(CHUNK)).map(|i| (i as u64, CHUNK.min(samples - i * CHUNK))).collect();
    // moments about f(z) keep the variance sum well conditioned
    let parts = try_par_map(mode, &chunks, |&(stream, len)| -> Result<[f64; 4]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut acc = [0.0; 4];
        for _ in 0..len {
            let zeta = uniform_sphere_point(&mut rng, n);
            let w: Vec<Complex64> = zeta.into_iter().map(|c| c * r).collect();
            let d = f.evaluate(&moebius(z, &w)?)? - value;
            acc[0] += d.re;
            acc[1] += d.im;
            acc[2] += d.re * d.re;
            acc[3] += d.im * d.im;
        }
        Ok(acc)
    })?;
    let mut tot = [0.0; 4];
    for p in parts {
        for (t, v) in tot.iter_mut().zip(p) {
            *t += v;
        }
    }
    let nf = samples as f64;
    let (mr, mi) = (tot[0] / nf, tot[1] / nf);
    let var = (tot[2] - nf * mr * mr + tot[3] - nf * mi * mi) / (nf - 1.0);
    let diff = Complex64::new(mr, mi);
    Ok(MeanValueCheck { value, mean: value + diff, residual: diff.norm(), stderr: (var.max(0.0) / nf).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exact, BigradedPolynomial};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn moebius_swaps_and_involutes() {
        let z = [c(0.3, -0.2), c(0.1, 0.4)];
        let zero = [c(0.0, 0.0), c(0.0, 0.0)];
        let a = moebius(&z, &zero).unwrap();
        assert!(a.iter().zip(&z).all(|(x, y)| (x - y).norm() < 1e-15));
        assert!(moebius(&z, &z).unwrap().iter().all(|x| x.norm() < 1e-15));
        let w = [c(-0.5, 0.1), c(0.2, 0.6)];
        let back = moebius(&z, &moebius(&z, &w).unwrap()).unwrap();
        assert!(back.iter().zip(&w).all(|(x, y)| (x - y).norm() < 1e-12));
        assert_eq!(moebius(&zero, &w).unwrap(), vec![-w[0], -w[1]]);
    }

    #[test]
    fn moebius_preserves_the_sphere() {
        let z = [c(0.6, 0.1), c(-0.2, 0.3)];
        let w = [c(0.8, 0.0), c(0.0, 0.6)];
        let v = moebius(&z, &w).unwrap();
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-13);
        assert!(moebius(&[c(1.0, 0.0), c(0.0, 0.0)], &w).is_err());
    }

    #[test]
    fn constant_functions_have_zero_residual() {
        let f = MhFunction::single(2, 0, 0, BigradedPolynomial::constant(2, exact(2, 1))).unwrap();
        let r = mean_value_residual(&f, &[c(0.2, 0.1), c(0.0, -0.3)], 0.5, 1000, 1).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn mean_value_holds_for_a_mixed_component() {
        let h = BigradedPolynomial::monomial(2, &[1, 0], &[0, 1], exact(1, 0)).unwrap();
        let f = MhFunction::single(2, 1, 1, h).unwrap();
        let z = [c(0.4, 0.0), c(0.1, 0.0)];
        let r = mean_value_residual(&f, &z, 0.5, 100_000, 11).unwrap();
        assert!(r.residual <= 4.0 * r.stderr, "{r:?}");
        let seq = mean_value_residual_in(ExecutionMode::Sequential, &f, &z, 0.5, 100_000, 11).unwrap();
        assert_eq!(seq, r);
    }
}
