//! Gauss–Jacobi rules on `[0, 1]` for the weight `t^β (1 − t)^α`, adaptive
//! order doubling, tensor-product rules and a graded rule for integrands
//! with logarithmic singularities at `t = 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::ln_beta;

/// Orders tried by the adaptive integrators.
pub const MIN_ORDER: usize = 16;
pub const MAX_ORDER: usize = 4096;
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Nodes and weights of an `order`-point Gauss rule for
/// `∫₀¹ t^beta_exp (1 − t)^alpha_exp f(t) dt`.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule {
    pub order: usize,
    pub alpha_exp: f64,
    pub beta_exp: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Sum of the weights, i.e. `B(beta_exp + 1, alpha_exp + 1)`.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Difference between the last two refinements.
    pub err_est: f64,
}

fn check_exponent(name: &str, e: f64) -> Result<()> {
    if e > -1.0 && e.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {e} must exceed −1 for an integrable weight")))
    }
}

/// Builds the rule by the Golub–Welsch method: the nodes are the eigenvalues
/// of the Jacobi matrix of the weight and the weights come from the first
/// components of its eigenvectors.
pub fn build_rule(order: usize, alpha_exp: f64, beta_exp: f64) -> Result<QuadratureRule> {
    check_exponent("alpha_exp", alpha_exp)?;
    check_exponent("beta_exp", beta_exp)?;
    if order == 0 {
        return Err(Error::domain("quadrature order must be positive"));
    }
    // Recurrence of the Jacobi weight (1−x)^α (1+x)^β on [−1, 1].
    let (a, b) = (alpha_exp, beta_exp);
    let ab = a + b;
    let mut diag = vec![0.0; order];
    let mut off = vec![0.0; order];
    for (k, d) in diag.iter_mut().enumerate() {
        let x = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let kk = 2.0 * k as f64 + ab;
            (b * b - a * a) / (kk * (kk + 2.0))
        };
        *d = 0.5 * (x + 1.0);
    }
    for k in 1..order {
        let kf = k as f64;
        let bk = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let kk = 2.0 * kf + ab;
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (kk * kk * (kk + 1.0) * (kk - 1.0))
        };
        off[k - 1] = 0.5 * bk.sqrt();
    }
    let mut first = vec![0.0; order];
    first[0] = 1.0;
    symmetric_tridiagonal_ql(&mut diag, &mut off, &mut first)?;

    let mass = ln_beta(b + 1.0, a + 1.0).exp();
    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first.into_iter().map(|v| mass * v * v)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule { order, alpha_exp, beta_exp, nodes, weights })
}

/// Implicit QL iteration with Wilkinson-type shifts on a symmetric
/// tridiagonal matrix. On return `d` holds the eigenvalues and `z` the first
/// row of the orthogonal eigenvector matrix (it must start as `e₁`).
fn symmetric_tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::non_convergence("tridiagonal eigenvalue iteration"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zi1 = z[i + 1];
                z[i + 1] = s * z[i] + c * zi1;
                z[i] = c * z[i] - s * zi1;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

type RuleKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`build_rule`]. Construction happens outside the lock, so two
/// threads may occasionally build the same rule; the first insert wins.
pub fn cached_rule(order: usize, alpha_exp: f64, beta_exp: f64) -> Result<Arc<QuadratureRule>> {
    let key = (order, alpha_exp.to_bits(), beta_exp.to_bits());
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_rule(order, alpha_exp, beta_exp)?);
    let mut guard = cache().lock().expect("rule cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(rule)))
}

fn converged(prev: f64, cur: f64, rel_tol: f64) -> bool {
    (cur - prev).abs() <= rel_tol * cur.abs()
}

fn orders() -> impl Iterator<Item = usize> {
    std::iter::successors(Some(MIN_ORDER), |&n| (n < MAX_ORDER).then_some(2 * n))
}

/// `∫₀¹ t^beta_exp (1 − t)^alpha_exp f(t) dt` by order doubling from 16 to
/// 4096 until two successive values agree to `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, alpha_exp: f64, beta_exp: f64, rel_tol: f64) -> Result<Estimate> {
    check_exponent("alpha_exp", alpha_exp)?;
    check_exponent("beta_exp", beta_exp)?;
    let mut prev: Option<f64> = None;
    for order in orders() {
        let value = cached_rule(order, alpha_exp, beta_exp)?.apply(&f);
        if !value.is_finite() {
            return Err(Error::non_convergence(format!("integrand not finite at order {order}")));
        }
        if let Some(p) = prev {
            if converged(p, value, rel_tol) {
                return Ok(Estimate { value, err_est: (value - p).abs() });
            }
        }
        prev = Some(value);
    }
    Err(Error::non_convergence(format!("no agreement to {rel_tol:e} by order {MAX_ORDER}")))
}

/// Tensor-product analogue of [`integrate`] on `[0, 1]²`; `x_exps` and
/// `y_exps` are `(alpha_exp, beta_exp)` pairs.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    x_exps: (f64, f64),
    y_exps: (f64, f64),
    rel_tol: f64,
) -> Result<Estimate> {
    for e in [x_exps.0, x_exps.1, y_exps.0, y_exps.1] {
        check_exponent("exponent", e)?;
    }
    let mut prev: Option<f64> = None;
    for order in orders().take_while(|&n| n <= 1024) {
        let rx = cached_rule(order, x_exps.0, x_exps.1)?;
        let ry = cached_rule(order, y_exps.0, y_exps.1)?;
        let value: f64 = rx
            .nodes
            .iter()
            .zip(&rx.weights)
            .map(|(&x, &wx)| wx * ry.apply(|y| f(x, y)))
            .sum();
        if !value.is_finite() {
            return Err(Error::non_convergence(format!("integrand not finite at order {order}")));
        }
        if let Some(p) = prev {
            if converged(p, value, rel_tol) {
                return Ok(Estimate { value, err_est: (value - p).abs() });
            }
        }
        prev = Some(value);
    }
    Err(Error::non_convergence(format!("2-D rule: no agreement to {rel_tol:e} by order 1024")))
}

const GRADED_MAX_SEGMENTS: usize = 200;

/// `∫₀¹ t^beta_exp (1 − t)^alpha_exp f(t, 1 − t) dt` for integrands that
/// may carry powers of `ln(1 − t)`.
///
/// The interval is split into `[0, 1/2]`, pieces on which `w = 1 − t` runs
/// over `[w_i, 4w_i]` with `w_i = 2^{−1−2i}`, and a final piece `w ∈ [0, w_M]`
/// carrying the `w^alpha_exp` weight exactly. The closure receives both `t`
/// and `w` so that `w` keeps full relative precision.
pub fn integrate_graded(
    f: impl Fn(f64, f64) -> f64,
    alpha_exp: f64,
    beta_exp: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    let out = integrate_graded_many(1, |t, w, out: &mut [f64]| out[0] = f(t, w), alpha_exp, beta_exp, rel_tol)?;
    Ok(out[0])
}

/// Vector-valued [`integrate_graded`]: `f` fills `dim` integrand values per
/// point, and refinement continues until every component has converged.
pub fn integrate_graded_many(
    dim: usize,
    f: impl Fn(f64, f64, &mut [f64]),
    alpha_exp: f64,
    beta_exp: f64,
    rel_tol: f64,
) -> Result<Vec<Estimate>> {
    check_exponent("alpha_exp", alpha_exp)?;
    check_exponent("beta_exp", beta_exp)?;
    let mut segments = None;
    let mut prev: Option<Vec<f64>> = None;
    for order in orders().take_while(|&n| n <= 512) {
        let (value, m) = graded_pass(dim, &f, alpha_exp, beta_exp, rel_tol, order, segments)?;
        segments = Some(m);
        if value.iter().any(|v| !v.is_finite()) {
            return Err(Error::non_convergence(format!("integrand not finite at order {order}")));
        }
        if let Some(p) = &prev {
            if p.iter().zip(&value).all(|(&a, &b)| converged(a, b, rel_tol)) {
                return Ok(p
                    .iter()
                    .zip(&value)
                    .map(|(&a, &b)| Estimate { value: b, err_est: (b - a).abs() })
                    .collect());
            }
        }
        prev = Some(value);
    }
    Err(Error::non_convergence(format!("graded rule: no agreement to {rel_tol:e} by order 512")))
}

fn accumulate(
    dim: usize,
    rule: &QuadratureRule,
    scale: f64,
    map: impl Fn(f64, &mut [f64]),
    acc: &mut [f64],
) {
    let mut buf = vec![0.0; dim];
    let mut sum = vec![0.0; dim];
    for (&u, &wt) in rule.nodes.iter().zip(&rule.weights) {
        map(u, &mut buf);
        for (s, b) in sum.iter_mut().zip(&buf) {
            *s += wt * b;
        }
    }
    for (a, s) in acc.iter_mut().zip(&sum) {
        *a += scale * s;
    }
}

fn graded_pass(
    dim: usize,
    f: &impl Fn(f64, f64, &mut [f64]),
    alpha: f64,
    beta: f64,
    rel_tol: f64,
    order: usize,
    segments: Option<usize>,
) -> Result<(Vec<f64>, usize)> {
    let mut total = vec![0.0; dim];
    let head = cached_rule(order, 0.0, beta)?;
    accumulate(
        dim,
        &head,
        2f64.powf(-beta - 1.0),
        |u, out| {
            let t = 0.5 * u;
            let w = 1.0 - t;
            f(t, w, out);
            let g = w.powf(alpha);
            out.iter_mut().for_each(|v| *v *= g);
        },
        &mut total,
    );
    let legendre = cached_rule(order, 0.0, 0.0)?;
    let mut quiet = 0;
    let mut i = 1;
    let mut piece = vec![0.0; dim];
    loop {
        if let Some(m) = segments {
            if i > m {
                break;
            }
        } else if quiet >= 2 && i >= 3 {
            break;
        }
        if i > GRADED_MAX_SEGMENTS {
            return Err(Error::non_convergence("graded rule: tail contributions do not decay"));
        }
        // w ∈ [w_i, 4 w_i] with w_i = 2^{−1−2i}
        let wi = 0.5 * 0.25f64.powi(i as i32);
        piece.iter_mut().for_each(|v| *v = 0.0);
        accumulate(
            dim,
            &legendre,
            3.0 * wi,
            |u, out| {
                let w = wi * (4.0 - 3.0 * u);
                let t = 1.0 - w;
                f(t, w, out);
                let g = t.powf(beta) * w.powf(alpha);
                out.iter_mut().for_each(|v| *v *= g);
            },
            &mut piece,
        );
        let small = piece.iter().zip(total.iter()).all(|(&p, &tot)| {
            let tot = tot + p;
            p.abs() <= 1e-3 * rel_tol * tot.abs()
        });
        for (t, p) in total.iter_mut().zip(&piece) {
            *t += p;
        }
        quiet = if small { quiet + 1 } else { 0 };
        i += 1;
    }
    let m = i - 1;
    let tail_rule = cached_rule(order, alpha, 0.0)?;
    let scale = 0.5 * 0.25f64.powi(m as i32);
    accumulate(
        dim,
        &tail_rule,
        scale.powf(alpha + 1.0),
        |u, out| {
            let w = scale * (1.0 - u);
            let t = 1.0 - w;
            f(t, w, out);
            let g = t.powf(beta);
            out.iter_mut().for_each(|v| *v *= g);
        },
        &mut total,
    );
    Ok((total, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_beta;

    fn beta(a: f64, b: f64) -> f64 {
        ln_beta(a, b).exp()
    }

    #[test]
    fn single_point_legendre_is_midpoint() {
        let r = build_rule(1, 0.0, 0.0).unwrap();
        assert!((r.nodes[0] - 0.5).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mass_is_beta_function() {
        for &(n, s) in &[(2.0, 0.0), (3.0, -0.5), (2.0, 2.5), (1.0, -0.9)] {
            let r = build_rule(40, s, n - 1.0).unwrap();
            assert!((r.mass() / beta(n, s + 1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_on_beta_moments() {
        let r = build_rule(16, -0.5, 0.0).unwrap();
        for k in 0..32 {
            let got = r.apply(|t| t.powi(k));
            let want = beta(k as f64 + 1.0, 0.5);
            assert!((got / want - 1.0).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn nodes_inside_and_weights_positive() {
        let r = build_rule(256, -0.7, 3.2).unwrap();
        assert_eq!(r.nodes.len(), 256);
        assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn rejects_divergent_weights() {
        assert!(build_rule(8, -1.0, 0.0).is_err());
        assert!(build_rule(8, 0.0, -1.5).is_err());
        assert!(integrate(|_| 1.0, 0.0, -1.0, 1e-10).is_err());
    }

    #[test]
    fn agrees_with_dense_eigensolver() {
        use nalgebra::DMatrix;
        let (a, b) = (0.3, -0.4);
        let n = 12;
        let rule = build_rule(n, a, b).unwrap();
        let ab = a + b;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let x = if k == 0 { (b - a) / (ab + 2.0) } else {
                let kk = 2.0 * k as f64 + ab;
                (b * b - a * a) / (kk * (kk + 2.0))
            };
            m[(k, k)] = x;
        }
        for k in 1..n {
            let kf = k as f64;
            let bk = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let kk = 2.0 * kf + ab;
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (kk * kk * (kk + 1.0) * (kk - 1.0))
            };
            m[(k, k - 1)] = bk.sqrt();
            m[(k - 1, k)] = bk.sqrt();
        }
        let eig = m.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| ((eig.eigenvalues[i] + 1.0) / 2.0, eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mass = beta(b + 1.0, a + 1.0);
        for (i, (x, v)) in pairs.iter().enumerate() {
            assert!((rule.nodes[i] - x).abs() < 1e-13);
            assert!((rule.weights[i] / (mass * v) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn integrate_constant_gives_beta_mass() {
        let e = integrate(|_| 1.0, 0.0, 0.0, 1e-12).unwrap();
        assert!((e.value - 1.0).abs() < 1e-14);
        let e = integrate(|_| 1.0, -0.5, 1.0, 1e-12).unwrap();
        assert!((e.value / beta(2.0, 0.5) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn integrate_reports_nonconvergence() {
        // Oscillation beyond what order 4096 resolves.
        let r = integrate(|t| (1e5 * t).sin(), 0.0, 0.0, 1e-12);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn two_dimensional_beta_product() {
        let (n, s, p, q) = (2.0, 0.5, 3.0, 2.0);
        let e = integrate_2d(|_, _| 1.0, (n + s, p - 1.0), (n + s, q - 1.0), 1e-12).unwrap();
        let want = beta(p, n + s + 1.0) * beta(q, n + s + 1.0);
        assert!((e.value / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_matches_iterated_on_separable() {
        let fx = |x: f64| (1.0 + x).ln();
        let fy = |y: f64| (0.3 * y).exp();
        let ix = integrate(fx, 0.5, 1.0, 1e-14).unwrap().value;
        let iy = integrate(fy, -0.3, 0.0, 1e-14).unwrap().value;
        let e = integrate_2d(|x, y| fx(x) * fy(y), (0.5, 1.0), (-0.3, 0.0), 1e-14).unwrap();
        assert!((e.value / (ix * iy) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn graded_handles_log_squared_endpoint() {
        // ∫₀¹ (1−t)^{−1/2} ln²(1−t) dt = 16
        let e = integrate_graded(|_, w| w.ln().powi(2), -0.5, 0.0, 1e-12).unwrap();
        assert!((e.value / 16.0 - 1.0).abs() < 1e-11, "{}", e.value);
        // ∫₀¹ t² (1−t)^{0.3} ln(1−t) dt = B(3, 1.3)(ψ(1.3) − ψ(4.3))
        use crate::specfun::digamma;
        let want = beta(3.0, 1.3) * (digamma(1.3) - digamma(4.3));
        let e = integrate_graded(|_, w| w.ln(), 0.3, 2.0, 1e-12).unwrap();
        assert!((e.value / want - 1.0).abs() < 1e-11);
    }

    #[test]
    fn graded_agrees_on_smooth_integrands() {
        let e = integrate_graded(|t, _| (2.0 * t).cos(), 1.5, 0.5, 1e-12).unwrap();
        let r = integrate(|t| (2.0 * t).cos(), 1.5, 0.5, 1e-13).unwrap();
        assert!((e.value / r.value - 1.0).abs() < 1e-11);
    }
}
