//! Diagonal Bergman coefficients `c_pq(s)`: the squared weighted Bergman
//! norm of the M-harmonic extension of a unit-norm sphere harmonic of
//! bidegree `(p, q)`, together with the Sobolev-type coefficients
//! `c_{pq,k}(s)` built from radial derivatives.
//!
//! Three independent routes are available for `c_pq(s)`:
//!
//! * [`Route::Quadrature`]: the radial integral of `S_pq²` against
//!   `t^{p+q+n−1}(1−t)^s` (only for `s > −1`);
//! * [`Route::DoubleIntegral`]: a double integral over `[0,1]²` of a single
//!   `₂F₁` whose parameters no longer depend on `p, q`; it continues the
//!   coefficient analytically to `s > −n−1`;
//! * [`Route::SeriesNoninteger`]: a two-lattice hypergeometric series valid
//!   for non-integer `n`, used at integer `n` through symmetric extrapolation.
//!
//! [`Route::ClosedP0`] gives the closed form when `pq = 0`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_2d, integrate_graded, integrate_graded_many, Estimate, DEFAULT_REL_TOL};
use crate::radial::RadialProfile;
use crate::specfun::{gamma_ratio, hyp2f1_tw, pochhammer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Quadrature,
    DoubleIntegral,
    ClosedP0,
    SeriesNoninteger,
    Auto,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Quadrature => "quadrature",
            Route::DoubleIntegral => "double_integral",
            Route::ClosedP0 => "closed_p0",
            Route::SeriesNoninteger => "series_noninteger",
            Route::Auto => "auto",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "quadrature" => Route::Quadrature,
            "double_integral" => Route::DoubleIntegral,
            "closed_p0" => Route::ClosedP0,
            "series_noninteger" => Route::SeriesNoninteger,
            "auto" => Route::Auto,
            other => return Err(Error::Invalid(format!("unknown route '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffRequest {
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub s: f64,
    pub route: Route,
    pub rel_tol: f64,
}

impl CoeffRequest {
    pub fn new(n: u32, p: u32, q: u32, s: f64) -> Self {
        Self { n, p, q, s, route: Route::Auto, rel_tol: DEFAULT_REL_TOL }
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// The route [`c_pq`] would take for this request.
    pub fn resolved_route(&self) -> Route {
        match self.route {
            Route::Auto if self.p == 0 || self.q == 0 => Route::ClosedP0,
            Route::Auto if self.s > -1.0 => Route::Quadrature,
            Route::Auto => Route::DoubleIntegral,
            r => r,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::precondition("dimension n must be at least 1"));
        }
        let n = self.n as f64;
        if !(self.s > -n - 1.0) {
            return Err(Error::precondition(format!("s = {} must exceed −n−1 = {}", self.s, -n - 1.0)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::precondition("tolerance must be positive"));
        }
        match self.resolved_route() {
            Route::Quadrature if !(self.s > -1.0) => {
                Err(Error::precondition(format!("quadrature route needs s > −1, got {}", self.s)))
            }
            Route::DoubleIntegral | Route::SeriesNoninteger if self.p == 0 || self.q == 0 => {
                Err(Error::precondition("this route needs p ≥ 1 and q ≥ 1"))
            }
            Route::ClosedP0 if self.p != 0 && self.q != 0 => Err(Error::precondition("closed form needs p = 0 or q = 0")),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffResult {
    pub value: f64,
    pub err_est: f64,
    pub route_used: Route,
}

/// Route dispatcher: closed form when `pq = 0`, radial quadrature when
/// `s > −1`, the double integral otherwise.
pub fn c_pq(req: &CoeffRequest) -> Result<CoeffResult> {
    req.validate()?;
    let CoeffRequest { n, p, q, s, rel_tol, .. } = *req;
    match req.resolved_route() {
        Route::ClosedP0 => c_0q_closed(n, p.max(q), s),
        Route::Quadrature => c_pq_quadrature(n, p, q, s, rel_tol),
        Route::DoubleIntegral => c_pq_double_integral(n, p, q, s, rel_tol),
        Route::SeriesNoninteger => c_pq_extrapolated(n, p, q, s, SERIES_KMAX),
        Route::Auto => unreachable!("resolved above"),
    }
}

/// `(s+1)_n / Γ(n) · ∫₀¹ t^{p+q+n−1} (1−t)^s S_pq(t)² dt` for `s > −1`.
pub fn c_pq_quadrature(n: u32, p: u32, q: u32, s: f64, rel_tol: f64) -> Result<CoeffResult> {
    if !(s > -1.0) {
        return Err(Error::precondition(format!("quadrature route needs s > −1, got {s}")));
    }
    let prof = RadialProfile::new(n as f64, p, q)?;
    let pre = pochhammer(s + 1.0, n as f64)? / gamma_ratio(&[n as f64], &[])?;
    let beta = (p + q + n) as f64 - 1.0;
    let est = if p == 0 || q == 0 {
        integrate(|_| 1.0, s, beta, rel_tol)?
    } else {
        // S_pq carries a (1−t)^n ln(1−t) term, which the graded rule resolves
        // geometrically instead of algebraically.
        graded_checked(|t, w| prof.s_pq_tw(t, w).map(|v| v * v), s, beta, rel_tol)?
    };
    Ok(CoeffResult { value: pre * est.value, err_est: pre * est.err_est, route_used: Route::Quadrature })
}

/// Prefactor `Γ(s+n+1)Γ(s+2n+1) / (Γ(n)³ Γ(2s+2n+2)) · (p)_n (q)_n` of the
/// double-integral representation.
fn double_integral_prefactor(n: f64, p: f64, q: f64, s: f64) -> Result<f64> {
    let g = gamma_ratio(&[s + n + 1.0, s + 2.0 * n + 1.0], &[n, n, n, 2.0 * s + 2.0 * n + 2.0])?;
    Ok(g * pochhammer(p, n)? * pochhammer(q, n)?)
}

/// `c_pq(s)` for `p, q ≥ 1` and `s > −n−1` from the double integral of
/// `₂F₁(s+1, n+s+1; 2n+2s+2; 1−xy)` against
/// `x^{p−1}(1−x)^{n+s} y^{q−1}(1−y)^{n+s}`.
pub fn c_pq_double_integral(n: u32, p: u32, q: u32, s: f64, rel_tol: f64) -> Result<CoeffResult> {
    if p == 0 || q == 0 {
        return Err(Error::precondition("double-integral route needs p ≥ 1 and q ≥ 1"));
    }
    let nf = n as f64;
    if !(s > -nf - 1.0) {
        return Err(Error::precondition(format!("s = {s} must exceed −n−1")));
    }
    let (a, b, c) = (s + 1.0, nf + s + 1.0, 2.0 * nf + 2.0 * s + 2.0);
    let pre = double_integral_prefactor(nf, p as f64, q as f64, s)?;
    let err = std::cell::Cell::new(None);
    let est = integrate_2d(
        |x, y| {
            let w = x * y;
            match hyp2f1_tw(a, b, c, 1.0 - w, w) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    f64::NAN
                }
            }
        },
        (nf + s, p as f64 - 1.0),
        (nf + s, q as f64 - 1.0),
        rel_tol,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    let est = est?;
    Ok(CoeffResult { value: pre * est.value, err_est: pre * est.err_est, route_used: Route::DoubleIntegral })
}

/// Closed form `Γ(q+n)Γ(n+s+1) / (Γ(n+s+q+1)Γ(n))` of `c_0q(s) = c_q0(s)`,
/// valid for `s > −n−1`.
pub fn c_0q_closed(n: u32, q: u32, s: f64) -> Result<CoeffResult> {
    let nf = n as f64;
    if !(s > -nf - 1.0) {
        return Err(Error::precondition(format!("s = {s} must exceed −n−1")));
    }
    if q == 0 {
        return Ok(CoeffResult { value: 1.0, err_est: 0.0, route_used: Route::ClosedP0 });
    }
    let qf = q as f64;
    let value = gamma_ratio(&[qf + nf, nf + s + 1.0], &[nf + s + qf + 1.0, nf])?;
    Ok(CoeffResult { value, err_est: value * 4.0 * f64::EPSILON, route_used: Route::ClosedP0 })
}

/// Default truncation of the two-lattice series.
pub const SERIES_KMAX: usize = 1_000_000;

/// Two-lattice series for `c_pq(s)` at non-integer `n_eff > 0`: the sum over
/// `k ∈ ℕ` minus the sum over `k ∈ n_eff + ℕ` of one Γ-ratio term.
///
/// Terms decay like `k^{−2}` in both lattices with equal leading constants,
/// so both are cut at the same value `k ≤ kmax`, which leaves an `O(kmax^{−2})`
/// remainder.
pub fn c_pq_series_noninteger(n_eff: f64, p: u32, q: u32, s: f64, kmax: usize) -> Result<f64> {
    if !(n_eff > 0.0) || n_eff == n_eff.round() {
        return Err(Error::precondition(format!("series route needs non-integer n > 0, got {n_eff}")));
    }
    if p == 0 || q == 0 {
        return Err(Error::precondition("series route needs p ≥ 1 and q ≥ 1"));
    }
    if !(s > -n_eff - 1.0) {
        return Err(Error::precondition(format!("s = {s} must exceed −n−1")));
    }
    let (n, pf, qf) = (n_eff, p as f64, q as f64);
    // (s+1)_n/Γ(n) folded into the start values so that Γ(s+1) poles cancel.
    let common = [pf + n, qf + n];
    let first = gamma_ratio(
        &[common[0], common[1], s + 1.0 + n, n + s + 1.0],
        &[n, n, pf + n + s + 1.0, qf + n + s + 1.0],
    )?;
    let second = gamma_ratio(
        &[pf + n, qf + n, common[0], common[1], 1.0 - n, s + 1.0 + n, s + n + 1.0, 2.0 * n + s + 1.0],
        &[n, n, 1.0 + n, pf, qf, s + 1.0, pf + 2.0 * n + s + 1.0, qf + 2.0 * n + s + 1.0],
    )?;
    let ratio = |k: f64| {
        (pf + k) * (qf + k) * (s + k + 1.0) * (n + s + k + 1.0)
            / ((1.0 - n + k) * (1.0 + k) * (pf + n + s + 1.0 + k) * (qf + n + s + 1.0 + k))
    };
    let lattice = |start: f64, offset: f64| {
        let mut term = start;
        let mut sum = 0.0;
        let mut comp = 0.0;
        let mut j = 0usize;
        while offset + j as f64 <= kmax as f64 {
            // Kahan summation: the two lattices nearly cancel.
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            if term == 0.0 {
                break;
            }
            term *= ratio(offset + j as f64);
            j += 1;
        }
        sum
    };
    let value = lattice(first, 0.0) - lattice(second, n);
    if !value.is_finite() {
        return Err(Error::non_convergence("two-lattice series overflowed"));
    }
    Ok(value)
}

/// Offsets of the symmetric extrapolation in the dimension parameter.
pub const EXTRAPOLATION_EPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// `c_pq(s)` at integer `n` from the two-lattice series at `n ± ε`.
///
/// The symmetric mean `A(ε) = (c(n+ε) + c(n−ε))/2` is even in `ε`, so two
/// Richardson steps (in `ε²`, then `ε⁴`) are applied over
/// [`EXTRAPOLATION_EPS`]. The error estimate is the change made by the last
/// step.
pub fn c_pq_extrapolated(n: u32, p: u32, q: u32, s: f64, kmax: usize) -> Result<CoeffResult> {
    let nf = n as f64;
    let mut a = [0.0; 3];
    for (slot, &eps) in a.iter_mut().zip(EXTRAPOLATION_EPS.iter()) {
        let up = c_pq_series_noninteger(nf + eps, p, q, s, kmax)?;
        let down = c_pq_series_noninteger(nf - eps, p, q, s, kmax)?;
        *slot = 0.5 * (up + down);
    }
    // halving ε divides the ε² term by 4 and the ε⁴ term by 16
    let r1 = [(4.0 * a[1] - a[0]) / 3.0, (4.0 * a[2] - a[1]) / 3.0];
    let r2 = (16.0 * r1[1] - r1[0]) / 15.0;
    Ok(CoeffResult { value: r2, err_est: (r2 - r1[1]).abs(), route_used: Route::SeriesNoninteger })
}

/// `(p+1)^{s+1} (q+1)^{s+1} c_pq(s)` through the dispatcher.
pub fn normalized_c(n: u32, p: u32, q: u32, s: f64) -> Result<f64> {
    let c = c_pq(&CoeffRequest::new(n, p, q, s))?;
    Ok(((p + 1) as f64 * (q + 1) as f64).powf(s + 1.0) * c.value)
}

/// Value of a Sobolev-type coefficient, or the report that its integral
/// diverges at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KCoefficient {
    Finite(Estimate),
    Divergent,
}

impl KCoefficient {
    pub fn value(&self) -> Option<f64> {
        match self {
            KCoefficient::Finite(e) => Some(e.value),
            KCoefficient::Divergent => None,
        }
    }
}

/// `c_{pq,k}(s) = ∫₀¹ t^{n−1}(1−t)^s [D^k(t^{(p+q)/2} S_pq(t))]² dt` for
/// `0 ≤ k ≤ n+1`, `s > −1`, with `D = 2t d/dt`.
///
/// For `k = n+1` and `pq > 0` the integral is first tested for divergence at
/// `t = 1` from the growth of partial integrals.
pub fn c_pq_k(n: u32, p: u32, q: u32, k: u32, s: f64, rel_tol: f64) -> Result<KCoefficient> {
    if !(s > -1.0) {
        return Err(Error::precondition(format!("s = {s} must exceed −1")));
    }
    if k > n + 1 {
        return Err(Error::precondition(format!("k = {k} exceeds n + 1 = {}", n + 1)));
    }
    if k <= n {
        let all = c_pq_k_all(n, p, q, k, s, rel_tol)?;
        return Ok(KCoefficient::Finite(all[k as usize]));
    }
    let prof = RadialProfile::new(n as f64, p, q)?;
    if p != 0 && q != 0 && tail_diverges(&prof, k, s)? {
        return Ok(KCoefficient::Divergent);
    }
    // Convergent case: the integrand behaves like (1−t)^{s−2}, so that factor
    // goes into the weight.
    let nf = n as f64;
    let alpha = if p != 0 && q != 0 { s - 2.0 } else { s };
    let scale = if p != 0 && q != 0 { 1.0 } else { 0.0 };
    let est = graded_checked(
        |t, w| {
            let g = prof.unnormalized_derivatives_tw(k, t, w)?[k as usize] * prof.normalization();
            let m = if scale == 1.0 { w } else { 1.0 };
            Ok((m * g).powi(2))
        },
        alpha,
        nf - 1.0,
        rel_tol,
    )?;
    Ok(KCoefficient::Finite(est))
}

/// `c_{pq,k}(s)` for every `k = 0..=kmax` (`kmax ≤ n`) in one integration.
pub fn c_pq_k_all(n: u32, p: u32, q: u32, kmax: u32, s: f64, rel_tol: f64) -> Result<Vec<Estimate>> {
    if !(s > -1.0) {
        return Err(Error::precondition(format!("s = {s} must exceed −1")));
    }
    if kmax > n {
        return Err(Error::precondition(format!("kmax = {kmax} exceeds n = {n}")));
    }
    let prof = RadialProfile::new(n as f64, p, q)?;
    let dim = kmax as usize + 1;
    if p == 0 && q == 0 {
        let mut out = vec![Estimate { value: 0.0, err_est: 0.0 }; dim];
        out[0] = integrate(|_| 1.0, s, n as f64 - 1.0, rel_tol)?;
        return Ok(out);
    }
    let c = prof.normalization();
    let err = std::cell::Cell::new(None);
    let est = integrate_graded_many(
        dim,
        |t, w, out| match prof.unnormalized_derivatives_tw(kmax, t, w) {
            Ok(v) => {
                for (o, g) in out.iter_mut().zip(v) {
                    *o = (c * g).powi(2);
                }
            }
            Err(e) => {
                err.set(Some(e));
                out.iter_mut().for_each(|o| *o = f64::NAN);
            }
        },
        s,
        n as f64 - 1.0,
        rel_tol,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    est
}

fn graded_checked(f: impl Fn(f64, f64) -> Result<f64>, alpha: f64, beta: f64, rel_tol: f64) -> Result<Estimate> {
    let err = std::cell::Cell::new(None);
    let est = integrate_graded(
        |t, w| match f(t, w) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        },
        alpha,
        beta,
        rel_tol,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    est
}

/// Smallest and largest `m` of the dyadic pieces `[1−2^{−m}, 1−2^{−m−1}]`
/// inspected by the divergence test.
pub const DIVERGENCE_WINDOW: (i32, i32) = (4, 24);
/// Increment ratio at or above which the partial integrals are declared
/// divergent.
pub const DIVERGENCE_RATIO: f64 = 0.9;

/// Partial-integral increments of the `k`-th coefficient integrand over the
/// dyadic pieces approaching `t = 1`.
pub fn partial_increments(prof: &RadialProfile, k: u32, s: f64) -> Result<Vec<f64>> {
    let rule = crate::quadrature::cached_rule(32, 0.0, 0.0)?;
    let n = prof.n;
    let c = prof.normalization();
    let mut out = Vec::new();
    for m in DIVERGENCE_WINDOW.0..=DIVERGENCE_WINDOW.1 {
        let len = 0.5f64.powi(m + 1);
        let w_hi = 2.0 * len;
        let mut sum = 0.0;
        for (&u, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let w = w_hi - len * u;
            let t = 1.0 - w;
            let g = c * prof.unnormalized_derivatives_tw(k, t, w)?[k as usize];
            sum += wt * t.powf(n - 1.0) * w.powf(s) * g * g;
        }
        out.push(len * sum);
    }
    Ok(out)
}

fn tail_diverges(prof: &RadialProfile, k: u32, s: f64) -> Result<bool> {
    let inc = partial_increments(prof, k, s)?;
    // judge on the last quarter of the window, where the leading power dominates
    let tail = &inc[inc.len() * 3 / 4..];
    Ok(tail.windows(2).all(|w| w[1] >= DIVERGENCE_RATIO * w[0]))
}

/// `p^{2k} Γ(n+p) / (s+1)_{n+p}`, the closed form of `c_{p0,k}(s)` for
/// `p > 0`.
pub fn c_p0_k_closed(n: u32, p: u32, k: u32, s: f64) -> Result<f64> {
    let (nf, pf) = (n as f64, p as f64);
    let g = gamma_ratio(&[nf + pf, s + 1.0], &[s + 1.0 + nf + pf])?;
    Ok(pf.powi(2 * k as i32) * g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_gamma_signed;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn trivial_coefficients() {
        for s in [-0.5, 0.0, 2.0] {
            let c = c_pq_quadrature(3, 0, 0, s, 1e-12).unwrap();
            assert!(rel(c.value, 1.0) < 1e-12);
        }
        let c = c_pq_quadrature(2, 0, 1, 0.0, 1e-12).unwrap();
        assert!(rel(c.value, 2.0 / 3.0) < 1e-12);
        assert_eq!(c_0q_closed(4, 0, 1.3).unwrap().value, 1.0);
        assert!(rel(c_0q_closed(2, 1, 0.0).unwrap().value, 2.0 / 3.0) < 1e-14);
    }

    #[test]
    fn closed_form_in_continuation_regime() {
        // Γ(5)Γ(1.5)/(Γ(4.5)Γ(2))
        let want = 24.0 * (ln_gamma_signed(1.5).unwrap().0 - ln_gamma_signed(4.5).unwrap().0).exp();
        let got = c_0q_closed(2, 3, -1.5).unwrap().value;
        assert!(rel(got, want) < 1e-14);
    }

    #[test]
    fn routes_agree_on_small_cases() {
        for &(n, p, q, s) in &[(2, 1, 1, 0.0), (3, 2, 5, 0.5), (2, 3, 4, 1.0), (3, 1, 2, -0.5)] {
            let a = c_pq_quadrature(n, p, q, s, 1e-12).unwrap().value;
            let b = c_pq_double_integral(n, p, q, s, 1e-12).unwrap().value;
            assert!(rel(a, b) < 1e-10, "n={n} p={p} q={q} s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn double_integral_is_positive_below_minus_one() {
        for s in [-1.5, -2.0, -2.5, -2.9] {
            let v = c_pq_double_integral(2, 1, 1, s, 1e-10).unwrap().value;
            assert!(v > 0.0 && v.is_finite(), "s={s}: {v}");
        }
    }

    #[test]
    fn dispatcher_routes() {
        let r = c_pq(&CoeffRequest::new(2, 0, 5, -2.0)).unwrap();
        assert_eq!(r.route_used, Route::ClosedP0);
        assert_eq!(r.value, c_0q_closed(2, 5, -2.0).unwrap().value);
        let r = c_pq(&CoeffRequest::new(2, 3, 4, 1.0)).unwrap();
        assert_eq!(r.route_used, Route::Quadrature);
        let r = c_pq(&CoeffRequest::new(2, 3, 4, -2.0)).unwrap();
        assert_eq!(r.route_used, Route::DoubleIntegral);
        let bad = CoeffRequest::new(2, 3, 4, -2.0).with_route(Route::Quadrature);
        assert!(c_pq(&bad).is_err());
        let bad = CoeffRequest::new(2, 0, 4, 0.0).with_route(Route::DoubleIntegral);
        assert!(c_pq(&bad).is_err());
        assert!(c_pq(&CoeffRequest::new(2, 1, 1, -3.0)).is_err());
    }

    #[test]
    fn route_names_round_trip() {
        for r in [Route::Quadrature, Route::DoubleIntegral, Route::ClosedP0, Route::SeriesNoninteger, Route::Auto] {
            assert_eq!(r.as_str().parse::<Route>().unwrap(), r);
        }
        assert!("simpson".parse::<Route>().is_err());
    }

    #[test]
    fn series_route_rejects_integer_dimension() {
        assert!(c_pq_series_noninteger(2.0, 1, 1, 0.0, 1000).is_err());
        assert!(c_pq_series_noninteger(2.5, 1, 1, 0.0, 1000).unwrap().is_finite());
    }

    #[test]
    fn extrapolated_series_matches_quadrature() {
        let quad = c_pq_quadrature(2, 1, 1, 0.0, 1e-12).unwrap().value;
        let ex = c_pq_extrapolated(2, 1, 1, 0.0, SERIES_KMAX).unwrap();
        assert!(rel(ex.value, quad) < 1e-6, "{} vs {quad}", ex.value);
    }

    #[test]
    fn normalized_pluriharmonic_values() {
        assert!(rel(normalized_c(3, 0, 0, 0.7).unwrap(), 1.0) < 1e-14);
        for q in [1u32, 5, 20] {
            let want = 2.0 * (q + 1) as f64 / (q + 2) as f64;
            assert!(rel(normalized_c(2, 0, q, 0.0).unwrap(), want) < 1e-13);
        }
    }

    #[test]
    fn k_coefficients_pluriharmonic_closed_form() {
        for &(n, p, k, s) in &[(2, 3, 1, 0.0), (3, 2, 2, 0.5), (2, 1, 2, -0.5), (3, 4, 3, 1.0)] {
            let got = c_pq_k(n, p, 0, k, s, 1e-12).unwrap().value().unwrap();
            let want = c_p0_k_closed(n, p, k, s).unwrap();
            assert!(rel(got, want) < 1e-10, "n={n} p={p} k={k}: {got} vs {want}");
        }
        assert_eq!(c_pq_k(2, 0, 0, 2, 0.0, 1e-10).unwrap().value(), Some(0.0));
    }

    #[test]
    fn k_zero_links_to_bergman_coefficient() {
        let ck = c_pq_k(3, 2, 3, 0, 0.5, 1e-12).unwrap().value().unwrap();
        let c = c_pq_quadrature(3, 2, 3, 0.5, 1e-12).unwrap().value;
        let pre = pochhammer(1.5, 3.0).unwrap() / 2.0;
        assert!(rel(pre * ck, c) < 1e-9);
    }

    #[test]
    fn divergence_flag_at_order_n_plus_one() {
        assert_eq!(c_pq_k(2, 1, 1, 3, 0.0, 1e-10).unwrap(), KCoefficient::Divergent);
        // s − 2 > −1: the integral converges
        assert!(matches!(c_pq_k(2, 1, 1, 3, 2.0, 1e-10).unwrap(), KCoefficient::Finite(_)));
        // pluriharmonic components never diverge
        assert!(matches!(c_pq_k(2, 3, 0, 3, 0.0, 1e-10).unwrap(), KCoefficient::Finite(_)));
    }
}
