//! Verification suites. Each check compares a computed quantity with an
//! identity, a bound or a limit and reduces the comparison to one metric,
//! which passes when it does not exceed the stated tolerance.
//!
//! Every check is also available as a standalone function so that callers
//! can run it with their own parameters.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    apply_box, apply_r, box_eigenvalue, laplacian, sphere_laplacian_eigenvalue,
    tangential_sum_of_squares, exact, BigradedPolynomial, ExactComplex,
};
use crate::coeffs::{c_0q_closed, c_pq, c_pq_double_integral, c_pq_k, c_pq_k_all, c_pq_quadrature, CoeffRequest};
use crate::error::{Error, Result};
use crate::mh::{
    blowup_constant, blowup_profile, diagonal_weights, mean_value_residual_in, random_function, random_harmonic,
    uniform_sphere_point, MhFunction, SobolevNorm, TangentialMode, NORM_NAMES,
};
use crate::parallel::{par_map, ExecutionMode};
use crate::quadrature::DEFAULT_REL_TOL;
use crate::radial::{i_pqs, RadialProfile};
use crate::specfun::{gamma_ratio, pochhammer, rising};
use crate::sweep::{stabilization, Stabilization, STABILIZATION_WINDOWS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    IdentityPe,
    Asymptotics,
    Eigenvalues,
    RadialOde,
    NormEquivalence,
    MeanValue,
    Sobolev,
    Blowup,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::IdentityPe,
        Suite::Asymptotics,
        Suite::Eigenvalues,
        Suite::RadialOde,
        Suite::NormEquivalence,
        Suite::MeanValue,
        Suite::Sobolev,
        Suite::Blowup,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::IdentityPe => "identity-pe",
            Suite::Asymptotics => "asymptotics",
            Suite::Eigenvalues => "eigenvalues",
            Suite::RadialOde => "radial-ode",
            Suite::NormEquivalence => "norm-equivalence",
            Suite::MeanValue => "mean-value",
            Suite::Sobolev => "sobolev",
            Suite::Blowup => "blowup",
        }
    }

    /// The result a suite verifies, for report headers.
    pub fn anchor(&self) -> &'static str {
        match self {
            Suite::IdentityPe => {
                "c_pq(s) as a double integral of one 2F1 agrees with the radial quadrature; \
                 closed Gamma-ratio form when pq = 0"
            }
            Suite::Asymptotics => "(p+1)^(s+1) (q+1)^(s+1) c_pq(s) is bounded above and below",
            Suite::Eigenvalues => {
                "box, R and the tangential sum of squares act on bidegree (p, q) harmonics by \
                 4pq+(2n-2)(p+q), p-q and (p+q)(p+q+2n-2)"
            }
            Suite::RadialOde => {
                "r^(p+q) S_pq(r^2) solves the radial form of the invariant Laplace equation; \
                 truncated expansions are M-harmonic in the limit"
            }
            Suite::NormEquivalence => {
                "weighted Bergman, tangential-derivative, box-smoothed and Hardy-smoothed norms \
                 are equivalent"
            }
            Suite::MeanValue => "M-harmonic functions have the invariant mean-value property",
            Suite::Sobolev => {
                "c_pq,k(s) behaves like [(p+1)(q+1)]^(2k-s-1); derivative sandwich and \
                 I-ratio bounds"
            }
            Suite::Blowup => "N^(n+1)[r^(p+q) 2F1(p, q; p+q+n; r^2)] grows like 2^n G(p+q+n)/(G(p)G(q)(1-r))",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite '{s}'")))
    }
}

/// Outcome of one check: `pass` iff `metric ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Wall time, kept out of serialized output so reports are reproducible.
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    fn new(check: impl Into<String>, parameters: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            parameters: parameters.into(),
            lhs: None,
            rhs: None,
            metric,
            tolerance,
            pass: metric <= tolerance,
            runtime: Duration::ZERO,
        }
    }

    fn sides(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }
}

fn timed(f: impl FnOnce() -> Result<VerificationReport>) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.runtime = start.elapsed();
    Ok(r)
}

/// Overrides for a suite's default parameters. `None` keeps the default.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub dims: Option<Vec<u32>>,
    pub s: Option<Vec<f64>>,
    pub p_max: Option<u32>,
    pub q_max: Option<u32>,
    pub rel_tol: f64,
    pub seed: u64,
    pub mode: ExecutionMode,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { dims: None, s: None, p_max: None, q_max: None, rel_tol: DEFAULT_REL_TOL, seed: 0, mode: ExecutionMode::default() }
    }
}

impl VerifyConfig {
    fn dims(&self, default: &[u32]) -> Vec<u32> {
        self.dims.clone().unwrap_or_else(|| default.to_vec())
    }

    fn s(&self, default: &[f64]) -> Vec<f64> {
        self.s.clone().unwrap_or_else(|| default.to_vec())
    }

    fn pq(&self, default: u32) -> (u32, u32) {
        (self.p_max.unwrap_or(default), self.q_max.unwrap_or(default))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub anchor: String,
    pub checks: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs every check of `suite`; an `Err` is a computational failure, as
/// opposed to a failed check.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mode = cfg.mode;
    let tol = cfg.rel_tol;
    let mut checks = Vec::new();
    match suite {
        Suite::IdentityPe => {
            let (pm, qm) = cfg.pq(24);
            for n in cfg.dims(&[2, 3]) {
                for s in cfg.s(&[-0.5, 0.0, 1.0, 2.5]) {
                    checks.push(route_agreement(mode, n, s, pm, qm, 1e-8)?);
                }
            }
            for s in [-0.5, 0.0, 2.0] {
                checks.push(closed_form_p0(mode, 2, s, 64, 1e-10)?);
            }
            for s in [-1.5, -2.0] {
                checks.push(continuation_p0(2, s, 64)?);
            }
        }
        Suite::Asymptotics => {
            for n in cfg.dims(&[2]) {
                for s in cfg.s(&[-2.0, -0.5, 0.0, 1.0]) {
                    checks.push(normalized_c_stabilization(mode, n, s, 0.25)?);
                }
            }
        }
        Suite::Eigenvalues => {
            let (pm, qm) = cfg.pq(6);
            for n in cfg.dims(&[2, 3, 4]) {
                checks.push(exact_eigenvalues(mode, n, pm, qm, cfg.seed)?);
            }
        }
        Suite::RadialOde => {
            let (pm, qm) = cfg.pq(10);
            for n in cfg.dims(&[2, 3]) {
                checks.push(radial_ode(mode, n, pm, qm, 20, 1e-8)?);
            }
            for (p, q) in [(1, 1), (2, 1)] {
                checks.extend(mharmonicity_decay(p, q, 0.7, 30, cfg.seed, 0.55, 1e-6)?);
            }
        }
        Suite::NormEquivalence => {
            for s in cfg.s(&[0.0]) {
                for m in [1, 2] {
                    checks.push(tangential_cross_validation(mode, 2, s, m, 2, 40, 1e-5)?);
                }
            }
            for n in cfg.dims(&[2, 3]) {
                for s in cfg.s(&[-0.5, 0.0, 1.0]) {
                    checks.push(norm_envelope(mode, n, s, 1, 1.0, 8, 100, cfg.seed, tol)?);
                }
            }
        }
        Suite::MeanValue => checks.extend(mean_value_triples(mode, 20, 1_000_000, cfg.seed, 4.0)?),
        Suite::Sobolev => {
            for n in cfg.dims(&[2]) {
                for s in cfg.s(&[0.0]) {
                    checks.extend(coefficient_k_stabilization(mode, n, s, 0.25)?);
                    checks.push(sobolev_normalization(n, s, 8, 1e-9)?);
                }
            }
            let sample = [1, 2, 3, 5, 8, 13, 21, 32];
            for n in cfg.dims(&[2]) {
                for s in [-0.5, 0.0, 1.0] {
                    checks.push(derivative_sandwich(mode, n, s, &sample, 1e-6)?);
                }
            }
            for n in [0, 1, 2, 3] {
                for s in [-0.5, 0.0, 1.0, 2.5] {
                    checks.push(i_ratio_bounds(mode, n, s, 4, 64, 1e-6)?);
                }
            }
        }
        Suite::Blowup => {
            for n in cfg.dims(&[2]) {
                for (p, q) in [(1, 1), (1, 2), (2, 2)] {
                    checks.push(blowup_fit(n, p, q, 1e-4, 0.05)?);
                    checks.push(divergence_flag(n, p, q, 0.0)?);
                }
            }
        }
    }
    Ok(SuiteReport { suite, anchor: suite.anchor().to_string(), checks })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Largest relative difference between the quadrature and the double
/// integral over `1 ≤ p ≤ p_max`, `1 ≤ q ≤ q_max`.
pub fn route_agreement(
    mode: ExecutionMode,
    n: u32,
    s: f64,
    p_max: u32,
    q_max: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    timed(|| {
        let cells: Vec<(u32, u32)> =
            (1..=p_max).flat_map(|p| (1..=q_max).map(move |q| (p, q))).filter(|&(p, q)| p <= q || p > q_max).collect();
        let inner = (tolerance * 1e-2).max(1e-14);
        let diffs = par_map(mode, &cells, |&(p, q)| -> Result<(f64, f64, f64)> {
            let a = c_pq_quadrature(n, p, q, s, inner)?.value;
            let b = c_pq_double_integral(n, p, q, s, inner)?.value;
            Ok((rel(b, a), a, b))
        });
        let mut worst = (0.0, f64::NAN, f64::NAN, (0, 0));
        for (cell, d) in cells.iter().zip(diffs) {
            let d = d?;
            if !(d.0 <= worst.0) {
                worst = (d.0, d.1, d.2, *cell);
            }
        }
        let params = format!("n={n} s={s} p<={p_max} q<={q_max} worst=({}, {})", worst.3 .0, worst.3 .1);
        Ok(VerificationReport::new("route agreement", params, worst.0, tolerance).sides(worst.1, worst.2))
    })
}

/// Quadrature against the Gamma-ratio closed form for `c_0q`, `q ≤ q_max`.
pub fn closed_form_p0(mode: ExecutionMode, n: u32, s: f64, q_max: u32, tolerance: f64) -> Result<VerificationReport> {
    timed(|| {
        let qs: Vec<u32> = (0..=q_max).collect();
        let diffs = par_map(mode, &qs, |&q| -> Result<(f64, f64)> {
            let a = c_pq_quadrature(n, 0, q, s, 1e-13)?.value;
            Ok((a, c_0q_closed(n, q, s)?.value))
        });
        let mut worst = (0.0, f64::NAN, f64::NAN);
        for d in diffs {
            let (a, b) = d?;
            if !(rel(a, b) <= worst.0) {
                worst = (rel(a, b), a, b);
            }
        }
        let params = format!("n={n} s={s} q<={q_max}");
        Ok(VerificationReport::new("closed form p=0", params, worst.0, tolerance).sides(worst.1, worst.2))
    })
}

/// Count of `q ≤ q_max` where the continued closed form is not finite and
/// positive, for `−n−1 < s ≤ −1`.
pub fn continuation_p0(n: u32, s: f64, q_max: u32) -> Result<VerificationReport> {
    timed(|| {
        let mut bad = 0;
        for q in 0..=q_max {
            let v = c_pq(&CoeffRequest::new(n, 0, q, s))?.value;
            if !(v.is_finite() && v > 0.0) {
                bad += 1;
            }
        }
        Ok(VerificationReport::new("continued closed form positive", format!("n={n} s={s} q<={q_max}"), bad as f64, 0.0))
    })
}

fn stabilization_report(check: &str, params: String, st: Stabilization, tolerance: f64) -> VerificationReport {
    let metric = if st.full.is_finite() { st.change() } else { f64::INFINITY };
    let params = format!("{params} spread[0,64]={:.6} spread[16,32]={:.6} spread[32,64]={:.6}", st.full, st.lower, st.upper);
    VerificationReport::new(check, params, metric, tolerance).sides(st.lower, st.upper)
}

/// Window spreads of `(p+1)^{s+1}(q+1)^{s+1} c_pq(s)` over `[0, 64]²`.
pub fn normalized_c_stabilization(mode: ExecutionMode, n: u32, s: f64, tolerance: f64) -> Result<VerificationReport> {
    timed(|| {
        let st = stabilization(mode, 0, |p, q| {
            let c = c_pq(&CoeffRequest::new(n, p, q, s))?.value;
            Ok(((p + 1) as f64 * (q + 1) as f64).powf(s + 1.0) * c)
        })?;
        Ok(stabilization_report("normalized c_pq stabilization", format!("n={n} s={s}"), st, tolerance))
    })
}

/// Exact checks on the monomials `z_i^p z̄_j^q` (`i ≠ j`) and one seeded
/// random harmonic element per bidegree: `□`, `R`, the tangential sums of
/// squares with and without `R`, and `Δ`. The metric counts failed
/// identities.
pub fn exact_eigenvalues(mode: ExecutionMode, n: u32, p_max: u32, q_max: u32, seed: u64) -> Result<VerificationReport> {
    timed(|| {
        let nn = n as usize;
        let cells: Vec<(u32, u32)> = (0..=p_max).flat_map(|p| (0..=q_max).map(move |q| (p, q))).collect();
        let failures = par_map(mode, &cells, |&(p, q)| -> Result<(u32, usize)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((p as u64) << 32) | q as u64);
            let mut elements = vec![random_harmonic(&mut rng, nn, p, q)?];
            for i in 0..nn {
                for j in (0..nn).filter(|&j| j != i) {
                    let (mut alpha, mut beta) = (vec![0; nn], vec![0; nn]);
                    alpha[i] = p;
                    beta[j] = q;
                    elements.push(BigradedPolynomial::monomial(nn, &alpha, &beta, exact(1, 0))?);
                }
            }
            let mut bad = 0;
            for h in &elements {
                bad += eigen_failures(h, n, p, q)?;
            }
            Ok((bad, elements.len()))
        });
        let (mut total, mut count) = (0, 0);
        for f in failures {
            let (b, c) = f?;
            total += b;
            count += c;
        }
        let params = format!("n={n} p<={p_max} q<={q_max} elements={count}");
        Ok(VerificationReport::new("exact eigenvalues", params, total as f64, 0.0))
    })
}

fn eigen_failures(h: &BigradedPolynomial<ExactComplex>, n: u32, p: u32, q: u32) -> Result<u32> {
    let lam = box_eigenvalue(n, p, q) as i64;
    let sigma = sphere_laplacian_eigenvalue(n, p, q) as i64;
    let boxed = apply_box(h);
    let checks = [
        laplacian(h).is_zero(),
        boxed == h.scale_int(lam),
        apply_r(h) == h.scale_int(p as i64 - q as i64),
        tangential_sum_of_squares(h, false)? == boxed,
        tangential_sum_of_squares(h, true)? == h.scale_int(sigma),
    ];
    Ok(checks.iter().filter(|ok| !**ok).count() as u32)
}

/// Largest relative residual of the radial equation at `points` equally
/// spaced interior radii, over `0 ≤ p ≤ p_max`, `0 ≤ q ≤ q_max`.
pub fn radial_ode(
    mode: ExecutionMode,
    n: u32,
    p_max: u32,
    q_max: u32,
    points: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    timed(|| {
        let cells: Vec<(u32, u32)> = (0..=p_max).flat_map(|p| (0..=q_max).map(move |q| (p, q))).collect();
        let res = par_map(mode, &cells, |&(p, q)| -> Result<f64> {
            let prof = RadialProfile::new(n as f64, p, q)?;
            let mut worst = 0.0f64;
            for i in 1..=points {
                worst = worst.max(prof.ode_residual(i as f64 / (points + 1) as f64)?);
            }
            Ok(worst)
        });
        let mut worst = 0.0f64;
        for r in res {
            worst = worst.max(r?);
        }
        let params = format!("n={n} p<={p_max} q<={q_max} radii={points}");
        Ok(VerificationReport::new("radial ODE residual", params, worst, tolerance))
    })
}

/// Symbolic invariant Laplacian of the truncations of `z₁^p z̄₂^q` in `C²` at
/// orders `1..=k_max`, sampled on 16 seeded points of the sphere of radius
/// `r0`. Returns the worst ratio of successive
/// residuals from order 5 on and the residual at `k_max`.
pub fn mharmonicity_decay(
    p: u32,
    q: u32,
    r0: f64,
    k_max: u32,
    seed: u64,
    rate_tolerance: f64,
    residual_tolerance: f64,
) -> Result<[VerificationReport; 2]> {
    let start = Instant::now();
    // z₁^p z̄₂^q is harmonic of bidegree (p, q) in C²
    let h = BigradedPolynomial::monomial(2, &[p, 0], &[0, q], exact(1, 0))?;
    let f = MhFunction::single(2, p, q, h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<Complex64>> =
        (0..16).map(|_| uniform_sphere_point(&mut rng, 2).into_iter().map(|c| c * r0).collect()).collect();
    let res: Vec<f64> = (1..=k_max).map(|k| f.mharmonicity_residual(k, &pts)).collect::<Result<_>>()?;
    let rate = res.windows(2).skip(3).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
    let last = *res.last().unwrap_or(&f64::NAN);
    let runtime = start.elapsed();
    let params = format!("n=2 (p, q)=({p}, {q}) r0={r0} K<={k_max}");
    let mut a = VerificationReport::new("M-harmonicity residual rate", params.clone(), rate, rate_tolerance);
    let mut b = VerificationReport::new("M-harmonicity residual at K", params, last, residual_tolerance);
    a.runtime = runtime;
    b.runtime = runtime;
    Ok([a, b])
}

/// Worst relative gap between spectral and symbolic tangential norms over
/// single monomial components `z₁^a z₂^b z̄₁^c z̄₂^d` that are harmonic with
/// `p, q ≤ pq_max`, in dimension `n`.
pub fn tangential_cross_validation(
    mode: ExecutionMode,
    n: u32,
    s: f64,
    m: u32,
    pq_max: u32,
    truncation: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    timed(|| {
        let funcs = harmonic_monomials(n as usize, pq_max)?;
        let gaps = par_map(mode, &funcs, |f| -> Result<(f64, f64, f64)> {
            let a = f.norm_tangential(s, m, TangentialMode::Spectral, DEFAULT_REL_TOL)?.value;
            let b = f.norm_tangential(s, m, TangentialMode::Symbolic { truncation }, DEFAULT_REL_TOL)?.value;
            Ok((rel(b, a), a, b))
        });
        let mut worst = (0.0, f64::NAN, f64::NAN);
        for g in gaps {
            let g = g?;
            if !(g.0 <= worst.0) {
                worst = g;
            }
        }
        let params = format!("n={n} s={s} m={m} p,q<={pq_max} K={truncation} functions={}", funcs.len());
        Ok(VerificationReport::new("tangential spectral vs symbolic", params, worst.0, tolerance).sides(worst.1, worst.2))
    })
}

/// One harmonic monomial-type element per bidegree `(p, q)` with
/// `p, q ≤ pq_max`: `z₁^p z̄₂^q` when `n ≥ 2`.
fn harmonic_monomials(n: usize, pq_max: u32) -> Result<Vec<MhFunction>> {
    if n < 2 {
        return Err(Error::precondition("mixed bidegrees need n ≥ 2"));
    }
    let mut out = Vec::new();
    for p in 0..=pq_max {
        for q in 0..=pq_max {
            let mut alpha = vec![0; n];
            let mut beta = vec![0; n];
            alpha[0] = p;
            beta[1] = q;
            let h = BigradedPolynomial::monomial(n, &alpha, &beta, exact(1, 0))?;
            out.push(MhFunction::single(n, p, q, h)?);
        }
    }
    Ok(out)
}

/// Ratios of the four equivalent norms on `count` seeded random finite sums
/// against the envelope of the same ratios over single components with
/// `p, q ≤ pq_max`. The metric is the largest factor by which a ratio
/// leaves the envelope, `max(lo/r, r/hi)`; values up to 1 lie inside.
#[allow(clippy::too_many_arguments)]
pub fn norm_envelope(
    mode: ExecutionMode,
    n: u32,
    s: f64,
    m: u32,
    t: f64,
    pq_max: u32,
    count: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<VerificationReport> {
    timed(|| {
        let nn = n as usize;
        let cells: Vec<(u32, u32)> = (0..=pq_max).flat_map(|p| (0..=pq_max).map(move |q| (p, q))).collect();
        let weights: Vec<[f64; 4]> = par_map(mode, &cells, |&(p, q)| {
            diagonal_weights(nn, p, q, s, m, t, rel_tol).map(|w| w.as_array())
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let mut lo = [[f64::INFINITY; 4]; 4];
        let mut hi = [[0.0f64; 4]; 4];
        for w in &weights {
            for i in 0..4 {
                for j in 0..4 {
                    lo[i][j] = lo[i][j].min(w[i] / w[j]);
                    hi[i][j] = hi[i][j].max(w[i] / w[j]);
                }
            }
        }
        let idx: Vec<u64> = (0..count as u64).collect();
        let quantities = par_map(mode, &idx, |&i| -> Result<[f64; 4]> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let comps = rng.gen_range(1..=4);
            let f = random_function(&mut rng, nn, pq_max, comps)?;
            Ok([
                f.norm_bergman(s, rel_tol)?,
                f.norm_tangential(s, m, TangentialMode::Spectral, rel_tol)?.value,
                f.norm_box_smoothed(s, t, rel_tol)?,
                f.norm_hardy_smoothed(s),
            ])
        });
        let mut worst: f64 = 0.0;
        let mut worst_pair = (0, 1);
        for qv in quantities {
            let qv = qv?;
            for i in 0..4 {
                for j in 0..4 {
                    if i == j {
                        continue;
                    }
                    let r = qv[i] / qv[j];
                    let out = (lo[i][j] / r).max(r / hi[i][j]);
                    if !(out <= worst) {
                        worst = out;
                        worst_pair = (i, j);
                    }
                }
            }
        }
        let params = format!(
            "n={n} s={s} m={m} t={t} p,q<={pq_max} functions={count} worst pair={}/{}",
            NORM_NAMES[worst_pair.0], NORM_NAMES[worst_pair.1]
        );
        Ok(VerificationReport::new("norm ratios inside single-component envelope", params, worst, 1.01))
    })
}

/// `count` seeded triples `(f, z, r)`: `f` a random sum over `C²` or `C³`,
/// `|z| ≤ 0.7`, `r ∈ [0.2, 0.9]`. The metric is `residual / stderr`.
pub fn mean_value_triples(
    mode: ExecutionMode,
    count: usize,
    samples: usize,
    seed: u64,
    sigmas: f64,
) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let n = 2 + i % 2;
        let f = random_function(&mut rng, n, 3, 3)?;
        let radius = 0.7 * rng.gen::<f64>().powf(1.0 / (2 * n) as f64);
        let z: Vec<Complex64> = uniform_sphere_point(&mut rng, n).into_iter().map(|c| c * radius).collect();
        let r = rng.gen_range(0.2..0.9);
        let mc_seed = rng.gen::<u64>();
        let chk = mean_value_residual_in(mode, &f, &z, r, samples, mc_seed)?;
        let metric = if chk.stderr > 0.0 {
            chk.residual / chk.stderr
        } else if chk.residual == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let params = format!("triple={i} n={n} |z|={radius:.4} r={r:.4} samples={samples}");
        let mut rep = VerificationReport::new("mean value", params, metric, sigmas);
        rep.lhs = Some(chk.value.norm());
        rep.rhs = Some(chk.mean.norm());
        rep.runtime = start.elapsed();
        out.push(rep);
    }
    Ok(out)
}

/// Window spreads of `c_{pq,k}(s) / [(p+1)(q+1)]^{2k−s−1}` for each
/// `k ≤ n`, then of the order-`m` Sobolev weight of a unit `(p, q)`
/// component divided by `[(p+1)(q+1)]^{2m−s−1}` for each `m ≤ n`. One table
/// of `c_{pq,k}` over `[0, 64]²` serves all `2n+2` checks.
pub fn coefficient_k_stabilization(
    mode: ExecutionMode,
    n: u32,
    s: f64,
    tolerance: f64,
) -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    let hi = STABILIZATION_WINDOWS[1].1;
    let cells: Vec<(u32, u32)> = (0..=hi).flat_map(|p| (p..=hi).map(move |q| (p, q))).collect();
    let rows = par_map(mode, &cells, |&(p, q)| -> Result<Vec<f64>> {
        Ok(c_pq_k_all(n, p, q, n, s, DEFAULT_REL_TOL)?.iter().map(|e| e.value).collect())
    });
    let mut table = HashMap::with_capacity(cells.len());
    for (cell, row) in cells.into_iter().zip(rows) {
        table.insert(cell, row?);
    }
    let lookup = |p: u32, q: u32| &table[&(p.min(q), p.max(q))];
    let scale = |p: u32, q: u32, k: u32| ((p + 1) as f64 * (q + 1) as f64).powf(2.0 * k as f64 - s - 1.0);
    let build = start.elapsed();
    let mut out = Vec::new();
    for k in 0..=n {
        let t0 = Instant::now();
        let st = stabilization(ExecutionMode::Sequential, 0, |p, q| Ok(lookup(p, q)[k as usize] / scale(p, q, k)))?;
        let mut r = stabilization_report("c_pq,k stabilization", format!("n={n} k={k} s={s}"), st, tolerance);
        r.runtime = build + t0.elapsed();
        out.push(r);
    }
    for m in 0..=n {
        let t0 = Instant::now();
        let st = stabilization(ExecutionMode::Sequential, 0, |p, q| {
            let ck = lookup(p, q);
            let sigma = sphere_laplacian_eigenvalue(n, p, q) as f64;
            let mut w = 0.0;
            for l in 0..=m {
                for k in 0..=l {
                    w += sigma.powi((l - k) as i32) * ck[k as usize];
                }
            }
            Ok(w / scale(p, q, m))
        })?;
        let mut r = stabilization_report("Sobolev weight stabilization", format!("n={n} m={m} s={s}"), st, tolerance);
        r.runtime = build + t0.elapsed();
        out.push(r);
    }
    Ok(out)
}

/// `(s+1)_n / Γ(n) · c_{pq,0}(s) = c_pq(s)` for `p, q ≤ pq_max`.
pub fn sobolev_normalization(n: u32, s: f64, pq_max: u32, tolerance: f64) -> Result<VerificationReport> {
    timed(|| {
        let scale = pochhammer(s + 1.0, n as f64)? * gamma_ratio(&[], &[n as f64])?;
        let mut worst = 0.0f64;
        for p in 0..=pq_max {
            for q in p..=pq_max {
                let k0 = c_pq_k_all(n, p, q, 0, s, 1e-13)?[0].value;
                let c = c_pq(&CoeffRequest::new(n, p, q, s).with_tol(1e-13))?.value;
                worst = worst.max(rel(scale * k0, c));
            }
        }
        Ok(VerificationReport::new("order-0 coefficient normalization", format!("n={n} s={s} p,q<={pq_max}"), worst, tolerance))
    })
}

/// `c_{pq,k}(s)` against the integral bounds from the derivative sandwich,
/// `(b)_k²/(n−k+1)_k² · I(n−k,k) ≤ c_{pq,k}/G² ≤ 4^k (b)_k² · I(n−k,k)` with
/// `b = p+q+n−k` and `G` the Gamma prefactor of the profile, for `k ≤ n` and
/// `p, q` from `sample`. The metric is the largest relative violation.
pub fn derivative_sandwich(
    mode: ExecutionMode,
    n: u32,
    s: f64,
    sample: &[u32],
    slack: f64,
) -> Result<VerificationReport> {
    timed(|| {
        let cells: Vec<(u32, u32)> =
            sample.iter().flat_map(|&p| sample.iter().filter(move |&&q| q >= p).map(move |&q| (p, q))).collect();
        let viol = par_map(mode, &cells, |&(p, q)| -> Result<f64> {
            let ck = c_pq_k_all(n, p, q, n, s, 1e-12)?;
            let nf = n as f64;
            let g = RadialProfile::new(nf, p, q)?.normalization();
            let mut worst = 0.0f64;
            for k in 0..=n {
                let i = i_pqs(nf - k as f64, k, p, q, s, 1e-12)?.value;
                let b = rising((p + q + n - k) as f64, k);
                let lower = b * b / rising((n - k + 1) as f64, k).powi(2) * i;
                let upper = 4f64.powi(k as i32) * b * b * i;
                let v = ck[k as usize].value / (g * g);
                worst = worst.max(lower / v - 1.0).max(v / upper - 1.0);
            }
            Ok(worst)
        });
        let mut worst = 0.0f64;
        for v in viol {
            worst = worst.max(v?);
        }
        let params = format!("n={n} s={s} k<={n} p,q in {sample:?}");
        Ok(VerificationReport::new("derivative sandwich", params, worst.max(0.0), slack))
    })
}

/// `I(n,k)/I(n,0) ∈ [k!/(s+2)_k, 1]` for `1 ≤ k ≤ k_max` on a sample of
/// `1 ≤ p+q ≤ deg_max`. The metric is the largest relative violation.
pub fn i_ratio_bounds(
    mode: ExecutionMode,
    n: u32,
    s: f64,
    k_max: u32,
    deg_max: u32,
    slack: f64,
) -> Result<VerificationReport> {
    timed(|| {
        let mut cells = Vec::new();
        for d in [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64].into_iter().filter(|&d| d <= deg_max) {
            cells.extend([(0, d), (1, d - 1), (d / 2, d - d / 2)]);
        }
        cells.sort_unstable();
        cells.dedup();
        let nf = n as f64;
        let viol = par_map(mode, &cells, |&(p, q)| -> Result<f64> {
            let i0 = i_pqs(nf, 0, p, q, s, 1e-12)?.value;
            let mut worst = 0.0f64;
            for k in 1..=k_max {
                let lower = rising(1.0, k) / rising(s + 2.0, k);
                let r = i_pqs(nf, k, p, q, s, 1e-12)?.value / i0;
                worst = worst.max(lower / r - 1.0).max(r - 1.0);
            }
            Ok(worst)
        });
        let mut worst = 0.0f64;
        for v in viol {
            worst = worst.max(v?);
        }
        let params = format!("n={n} s={s} k<={k_max} p+q<={deg_max} pairs={}", cells.len());
        Ok(VerificationReport::new("I-ratio bounds", params, worst.max(0.0), slack))
    })
}

/// `(1−r) N^{n+1}[…]` at `r = 1 − gap` against the limit constant.
pub fn blowup_fit(n: u32, p: u32, q: u32, gap: f64, tolerance: f64) -> Result<VerificationReport> {
    timed(|| {
        let r = 1.0 - gap;
        let (_, v) = blowup_profile(n, p, q, &[r])?[0];
        let fitted = v * gap;
        let c = blowup_constant(n, p, q)?;
        let params = format!("n={n} (p, q)=({p}, {q}) r=1-{gap:e}");
        Ok(VerificationReport::new("blow-up constant", params, rel(fitted, c), tolerance).sides(fitted, c))
    })
}

/// `c_{pq,n+1}(s)` and the order-`n+1` Sobolev quantity must both report
/// divergence; the metric counts the ones that do not.
pub fn divergence_flag(n: u32, p: u32, q: u32, s: f64) -> Result<VerificationReport> {
    timed(|| {
        let mut missed = 0;
        if c_pq_k(n, p, q, n + 1, s, DEFAULT_REL_TOL)?.value().is_some() {
            missed += 1;
        }
        let h = {
            let nn = n as usize;
            let mut alpha = vec![0; nn];
            let mut beta = vec![0; nn];
            alpha[0] = p;
            beta[nn - 1] = q;
            BigradedPolynomial::monomial(nn, &alpha, &beta, exact(1, 0))?
        };
        let f = MhFunction::single(n as usize, p, q, h)?;
        if !matches!(f.norm_sobolev(s, n + 1, DEFAULT_REL_TOL)?, SobolevNorm::Divergent { .. }) {
            missed += 1;
        }
        let params = format!("n={n} (p, q)=({p}, {q}) k={} s={s}", n + 1);
        Ok(VerificationReport::new("divergence flag", params, missed as f64, 0.0))
    })
}
