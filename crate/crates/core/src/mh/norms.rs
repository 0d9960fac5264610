use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::{smoothing_eigenvalue, MhFunction};
use crate::algebra::{
    ball_inner_product, iterated_tangential_weight, sphere_laplacian_eigenvalue, tangential_fields, BigradedPolynomial,
    TangentialField,
};
use crate::coeffs::{c_pq, c_pq_k, c_pq_k_all, CoeffRequest, KCoefficient};
use crate::error::{Error, Result};
use crate::radial::RadialProfile;
use crate::specfun::{gamma_ratio, pochhammer};
use num_complex::Complex64;

type CacheKey = (u32, u32, u32, u64, u64);

fn coefficient_cache() -> &'static Mutex<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `c_pq(s)` through the route dispatcher, memoized; `c_pq = c_qp`.
fn coefficient(n: usize, p: u32, q: u32, s: f64, rel_tol: f64) -> Result<f64> {
    let (p, q) = (p.min(q), p.max(q));
    let key = (n as u32, p, q, s.to_bits(), rel_tol.to_bits());
    if let Some(&v) = coefficient_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(v);
    }
    let v = c_pq(&CoeffRequest::new(n as u32, p, q, s).with_tol(rel_tol))?.value;
    coefficient_cache().lock().expect("cache poisoned").insert(key, v);
    Ok(v)
}

/// How the tangential norm is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentialMode {
    /// Closed diagonal formula: each `(p, q)` part is weighted by
    /// [`iterated_tangential_weight`] times `c_pq(s+m)`.
    Spectral,
    /// All `m`-fold products of the fields applied to the polynomial
    /// truncation of the given order, integrated with exact ball moments.
    Symbolic { truncation: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevNorm {
    Finite(f64),
    /// `c_{pq,k}(s)` is infinite for a component that is present.
    Divergent { p: u32, q: u32, k: u32 },
}

impl SobolevNorm {
    pub fn value(&self) -> Option<f64> {
        match self {
            SobolevNorm::Finite(v) => Some(*v),
            SobolevNorm::Divergent { .. } => None,
        }
    }
}

/// Per-bidegree multipliers of `‖h_pq‖²` in the four equivalent norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalWeights {
    /// `c_pq(s)`.
    pub bergman: f64,
    /// `w_m(p, q) · c_pq(s+m)` with `w_m` from [`iterated_tangential_weight`],
    /// and `1` at `(0, 0)`.
    pub tangential: f64,
    /// `(□+1)`-eigenvalue`^t · c_pq(s+t)`.
    pub box_smoothed: f64,
    /// `(□+1)`-eigenvalue`^{−s−1}`.
    pub hardy: f64,
}

impl DiagonalWeights {
    pub fn as_array(&self) -> [f64; 4] {
        [self.bergman, self.tangential, self.box_smoothed, self.hardy]
    }
}

pub const NORM_NAMES: [&str; 4] = ["bergman", "tangential", "box_smoothed", "hardy_smoothed"];

pub fn diagonal_weights(n: usize, p: u32, q: u32, s: f64, m: u32, t: f64, rel_tol: f64) -> Result<DiagonalWeights> {
    let lam = smoothing_eigenvalue(n, p, q);
    let tangential = if p + q == 0 {
        1.0
    } else {
        iterated_tangential_weight(n as u32, p, q, m, false) as f64 * coefficient(n, p, q, s + m as f64, rel_tol)?
    };
    Ok(DiagonalWeights {
        bergman: coefficient(n, p, q, s, rel_tol)?,
        tangential,
        box_smoothed: lam.powf(t) * coefficient(n, p, q, s + t, rel_tol)?,
        hardy: lam.powf(-s - 1.0),
    })
}

fn check_bergman_range(n: usize, s: f64, what: &str) -> Result<()> {
    if !(s > -(n as f64) - 1.0) {
        return Err(Error::precondition(format!("{what}: weight {s} must exceed −n−1 = {}", -(n as f64) - 1.0)));
    }
    Ok(())
}

impl MhFunction {
    fn diagonal_sum(&self, weight: impl Fn(u32, u32) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (p, q, norm) in self.sphere_norms() {
            acc += weight(p, q)? * norm;
        }
        Ok(acc)
    }

    /// `‖f‖²_s = Σ c_pq(s) ‖h_pq‖²` for `s > −n−1`.
    pub fn norm_bergman(&self, s: f64, rel_tol: f64) -> Result<f64> {
        check_bergman_range(self.n, s, "Bergman norm")?;
        self.diagonal_sum(|p, q| coefficient(self.n, p, q, s, rel_tol))
    }

    /// `Σ_{j₁..j_m} ‖X_{j₁}⋯X_{j_m} f‖²_{s+m} + |f(0)|²` over the `2n²`
    /// fields `L_jk`, `L̄_jk`. For `m = 0` both modes return `‖f‖²_s`.
    pub fn norm_tangential(&self, s: f64, m: u32, mode: TangentialMode, rel_tol: f64) -> Result<NormValue> {
        let f0 = self.value_at_origin().norm_sqr();
        match mode {
            TangentialMode::Spectral => {
                if m == 0 {
                    return Ok(NormValue { value: self.norm_bergman(s, rel_tol)?, err_est: 0.0 });
                }
                check_bergman_range(self.n, s + m as f64, "tangential norm")?;
                let sum = self.diagonal_sum(|p, q| {
                    if p + q == 0 {
                        return Ok(0.0);
                    }
                    let w = iterated_tangential_weight(self.n as u32, p, q, m, false) as f64;
                    Ok(w * coefficient(self.n, p, q, s + m as f64, rel_tol)?)
                })?;
                Ok(NormValue { value: sum + f0, err_est: 0.0 })
            }
            TangentialMode::Symbolic { truncation } => {
                let weight = s + m as f64;
                if !(weight > -1.0) {
                    return Err(Error::precondition(format!("symbolic tangential norm needs s + m > −1, got {weight}")));
                }
                let extra = if m == 0 { 0.0 } else { f0 };
                let est = self.extrapolated_tangential(truncation, m, weight)?;
                Ok(NormValue { value: est.value + extra, err_est: est.err_est })
            }
        }
    }

    /// Symbolic tangential sum at a single truncation order, without the
    /// `|f(0)|²` term or any tail correction.
    pub fn symbolic_tangential_raw(&self, truncation: u32, m: u32, s: f64) -> Result<f64> {
        let weight = s + m as f64;
        if !(weight > -1.0) {
            return Err(Error::precondition(format!("symbolic tangential norm needs s + m > −1, got {weight}")));
        }
        self.symbolic_tangential(truncation, m, weight)
    }

    /// Removes the algebraic truncation tail from the symbolic sums at
    /// orders `K/2, 5K/8, 3K/4, 7K/8, K`.
    ///
    /// The profile coefficients decay like `k^{−n−1}` and the radial moments
    /// like `k^{−w−1}`, so the tail is
    /// `K^{−a}(c₀ + c₁/K + c₂ log K/K² + c₃/K²)` with `a = w+n+1`.
    /// The estimate is the change from dropping the last basis term.
    fn extrapolated_tangential(&self, truncation: u32, m: u32, weight: f64) -> Result<NormValue> {
        let orders: Vec<u32> = [4u32, 5, 6, 7, 8].iter().map(|i| truncation * i / 8).collect();
        let distinct = orders.windows(2).all(|w| w[0] < w[1]) && orders[0] >= 2;
        let top = self.symbolic_tangential(truncation, m, weight)?;
        if self.components.iter().all(|c| c.p == 0 || c.q == 0) {
            return Ok(NormValue { value: top, err_est: 0.0 });
        }
        if !distinct {
            let coarse = self.symbolic_tangential(truncation * 3 / 4, m, weight)?;
            return Ok(NormValue { value: top, err_est: (top - coarse).abs() });
        }
        let mut values = Vec::with_capacity(orders.len());
        for &k in &orders[..orders.len() - 1] {
            values.push(self.symbolic_tangential(k, m, weight)?);
        }
        values.push(top);
        let a = weight + self.n as f64 + 1.0;
        let full = tail_extrapolate(&orders, &values, a, truncation as f64);
        let reduced = tail_extrapolate(&orders[1..], &values[1..], a, truncation as f64);
        match (full, reduced) {
            (Some(v), Some(r)) => Ok(NormValue { value: v, err_est: (v - r).abs() }),
            _ => Ok(NormValue { value: top, err_est: (top - values[values.len() - 2]).abs() }),
        }
    }

    fn symbolic_tangential(&self, truncation: u32, m: u32, weight: f64) -> Result<f64> {
        let poly = self.truncate_to_polynomial(truncation);
        // L_jj = 0, so the diagonal pairs contribute nothing
        let fields: Vec<TangentialField> = tangential_fields(self.n, false)
            .into_iter()
            .filter(|x| !matches!(x, TangentialField::L { j, k } | TangentialField::LBar { j, k } if j == k))
            .collect();
        fn walk(g: &BigradedPolynomial<Complex64>, depth: u32, fields: &[TangentialField], weight: f64) -> Result<f64> {
            if depth == 0 {
                return Ok(ball_inner_product(g, g, weight)?.re);
            }
            let mut acc = 0.0;
            for x in fields {
                let next = x.apply(g)?;
                if !next.is_zero() {
                    acc += walk(&next, depth - 1, fields, weight)?;
                }
            }
            Ok(acc)
        }
        walk(&poly, m, &fields, weight)
    }

    /// `‖(I+□)^{t/2} f‖²_{s+t} = Σ (□+1)^t c_pq(s+t) ‖h_pq‖²`.
    pub fn norm_box_smoothed(&self, s: f64, t: f64, rel_tol: f64) -> Result<f64> {
        check_bergman_range(self.n, s + t, "smoothed Bergman norm")?;
        self.diagonal_sum(|p, q| Ok(smoothing_eigenvalue(self.n, p, q).powf(t) * coefficient(self.n, p, q, s + t, rel_tol)?))
    }

    /// `‖(I+□)^{−(s+1)/2} f‖²` in the Hardy space: `Σ (□+1)^{−s−1} ‖h_pq‖²`.
    pub fn norm_hardy_smoothed(&self, s: f64) -> f64 {
        self.sphere_norms()
            .into_iter()
            .map(|(p, q, norm)| smoothing_eigenvalue(self.n, p, q).powf(-s - 1.0) * norm)
            .sum()
    }

    /// Sphere norms `‖g_r‖²` of the dilates `g_r(ζ) = g(rζ)` of
    /// `g = (I+□)^{−(s+1)/2} f`; they increase to the Hardy norm as `r → 1`.
    pub fn hardy_dilate_profile(&self, s: f64, r_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(r_grid.len());
        for &r in r_grid {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::domain(format!("dilation radius {r} outside [0, 1]")));
            }
            let mut acc = 0.0;
            for (p, q, norm) in self.sphere_norms() {
                let radial = RadialProfile::new(self.n as f64, p, q)?.radial_factor(r)?;
                acc += smoothing_eigenvalue(self.n, p, q).powf(-s - 1.0) * radial * radial * norm;
            }
            out.push((r, acc));
        }
        Ok(out)
    }

    /// Spectral form of the order-`m` weighted Sobolev quantity
    /// `Σ_{l ≤ m} Σ_{k ≤ l} Σ_pq [(p+q)(p+q+2n−2)]^{l−k} c_{pq,k}(s) ‖h_pq‖²`,
    /// scaled by `(s+1)_n/Γ(n)` so that `m = 0` gives `‖f‖²_s`.
    ///
    /// This is equivalent to the Sobolev norm, not equal to it. `m` may be
    /// `n + 1`, in which case components with `pq > 0` report divergence
    /// whenever the `k = n + 1` coefficient is infinite.
    pub fn norm_sobolev(&self, s: f64, m: u32, rel_tol: f64) -> Result<SobolevNorm> {
        if !(s > -1.0) {
            return Err(Error::precondition(format!("Sobolev norm needs s > −1, got {s}")));
        }
        let n = self.n as u32;
        if m > n + 1 {
            return Err(Error::precondition(format!("Sobolev order {m} exceeds n + 1 = {}", n + 1)));
        }
        let scale = pochhammer(s + 1.0, n as f64)? * gamma_ratio(&[], &[n as f64])?;
        let mut acc = 0.0;
        for (p, q, norm) in self.sphere_norms() {
            let mut ck: Vec<f64> = c_pq_k_all(n, p, q, m.min(n), s, rel_tol)?.iter().map(|e| e.value).collect();
            if m == n + 1 {
                match c_pq_k(n, p, q, m, s, rel_tol)? {
                    KCoefficient::Finite(e) => ck.push(e.value),
                    KCoefficient::Divergent => return Ok(SobolevNorm::Divergent { p, q, k: m }),
                }
            }
            let sigma = sphere_laplacian_eigenvalue(n, p, q) as f64;
            let mut weight = 0.0;
            for l in 0..=m {
                for k in 0..=l {
                    weight += sigma.powi((l - k) as i32) * ck[k as usize];
                }
            }
            acc += weight * norm;
        }
        Ok(SobolevNorm::Finite(scale * acc))
    }
}

/// Solves `V(K_i) = V − Σ_j c_j φ_j(K_i)` for `V`, with as many basis
/// functions `φ_j` as there are orders beyond the first.
fn tail_extrapolate(orders: &[u32], values: &[f64], a: f64, scale: f64) -> Option<f64> {
    let l = orders.len();
    let mut mat = nalgebra::DMatrix::<f64>::zeros(l, l);
    for (i, &k) in orders.iter().enumerate() {
        // x = K/scale keeps the columns of comparable size
        let x = k as f64 / scale;
        let lk = (k as f64).ln();
        let basis = [x.powf(-a), x.powf(-a - 1.0), x.powf(-a - 2.0) * lk, x.powf(-a - 2.0)];
        mat[(i, 0)] = 1.0;
        for j in 1..l {
            mat[(i, j)] = -basis[j - 1];
        }
    }
    let sol = mat.lu().solve(&nalgebra::DVector::from_column_slice(values))?;
    sol[0].is_finite().then_some(sol[0])
}

/// The four equivalent quantities for one function, a Sobolev value when
/// applicable, and all pairwise ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub n: usize,
    pub s: f64,
    pub m: u32,
    pub t: f64,
    pub bergman_s: f64,
    pub tangential_m: f64,
    pub box_smoothed_t: f64,
    pub hardy_smoothed: f64,
    /// `None` when `s ≤ −1` or `m > n`, where the quantity is not defined.
    pub sobolev_m: Option<SobolevNorm>,
    pub ratios: Vec<(String, String, f64)>,
}

impl NormReport {
    pub fn quantities(&self) -> [f64; 4] {
        [self.bergman_s, self.tangential_m, self.box_smoothed_t, self.hardy_smoothed]
    }
}

pub fn norm_report(f: &MhFunction, s: f64, m: u32, t: f64, rel_tol: f64) -> Result<NormReport> {
    let bergman_s = f.norm_bergman(s, rel_tol)?;
    let tangential_m = f.norm_tangential(s, m, TangentialMode::Spectral, rel_tol)?.value;
    let box_smoothed_t = f.norm_box_smoothed(s, t, rel_tol)?;
    let hardy_smoothed = f.norm_hardy_smoothed(s);
    let sobolev_m = if s > -1.0 && m as usize <= f.dim() { Some(f.norm_sobolev(s, m, rel_tol)?) } else { None };
    let q = [bergman_s, tangential_m, box_smoothed_t, hardy_smoothed];
    let mut ratios = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            ratios.push((NORM_NAMES[i].to_string(), NORM_NAMES[j].to_string(), q[i] / q[j]));
        }
    }
    Ok(NormReport { n: f.dim(), s, m, t, bergman_s, tangential_m, box_smoothed_t, hardy_smoothed, sobolev_m, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exact, BigradedPolynomial};
    use crate::coeffs::c_0q_closed;
    use crate::quadrature::DEFAULT_REL_TOL;

    const TOL: f64 = DEFAULT_REL_TOL;

    fn constant(c: (i64, i64)) -> MhFunction {
        MhFunction::single(2, 0, 0, BigradedPolynomial::constant(2, exact(c.0, c.1))).unwrap()
    }

    fn mixed() -> MhFunction {
        MhFunction::single(2, 1, 1, BigradedPolynomial::monomial(2, &[1, 0], &[0, 1], exact(1, 0)).unwrap()).unwrap()
    }

    fn c11(s: f64) -> f64 {
        c_pq(&CoeffRequest::new(2, 1, 1, s)).unwrap().value
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn constant_function_has_unit_weights() {
        let f = constant((3, 4));
        for s in [-2.5, -0.5, 0.0, 2.0] {
            let r = norm_report(&f, s, 1, 1.0, TOL).unwrap();
            for v in r.quantities() {
                assert!(close(v, 25.0, 1e-14), "s={s}: {v}");
            }
            assert!(r.ratios.iter().all(|(_, _, x)| close(*x, 1.0, 1e-14)));
        }
    }

    #[test]
    fn single_mixed_component_closed_forms() {
        let f = mixed();
        let sixth = 1.0 / 6.0;
        assert!(close(f.norm_bergman(0.0, TOL).unwrap(), c11(0.0) * sixth, 1e-14));
        let tang = f.norm_tangential(0.0, 1, TangentialMode::Spectral, TOL).unwrap().value;
        assert!(close(tang, 8.0 * c11(1.0) * sixth, 1e-14));
        assert!(close(f.norm_box_smoothed(0.0, 2.0, TOL).unwrap(), 81.0 * c11(2.0) * sixth, 1e-14));
        assert!(close(f.norm_hardy_smoothed(0.5), 9f64.powf(-1.5) * sixth, 1e-14));
        assert!(close(f.norm_box_smoothed(0.3, 0.0, TOL).unwrap(), f.norm_bergman(0.3, TOL).unwrap(), 1e-15));
    }

    #[test]
    fn bergman_matches_ball_moments_of_a_truncation() {
        let f = mixed();
        // the truncation error decays like K^-(s+n+1), so a heavier weight converges quickly
        let p = f.truncate_to_polynomial(60);
        let direct = ball_inner_product(&p, &p, 3.0).unwrap().re;
        let norm = f.norm_bergman(3.0, TOL).unwrap();
        assert!(close(direct, norm, 1e-7), "{direct} vs {norm}");
    }

    #[test]
    fn symbolic_tangential_matches_spectral() {
        let f = mixed();
        for m in [0, 1] {
            let spec = f.norm_tangential(0.0, m, TangentialMode::Spectral, TOL).unwrap().value;
            let sym = f.norm_tangential(0.0, m, TangentialMode::Symbolic { truncation: 40 }, TOL).unwrap();
            assert!(close(sym.value, spec, 1e-6), "m={m}: {} vs {spec}", sym.value);
            assert!(sym.err_est < 1e-5 * spec);
            let raw = f.symbolic_tangential_raw(40, m, 0.0).unwrap();
            assert!(raw < spec && close(raw, spec, 1e-3));
        }
    }

    #[test]
    fn hardy_dilates_increase_to_the_closed_form() {
        let f = mixed();
        let grid: Vec<f64> = (1..=20).map(|m| 1.0 - 0.5f64.powi(m)).collect();
        let prof = f.hardy_dilate_profile(0.0, &grid).unwrap();
        assert!(prof.windows(2).all(|w| w[1].1 >= w[0].1));
        let limit = f.norm_hardy_smoothed(0.0);
        let last = prof.last().unwrap().1;
        assert!(last <= limit && limit - last < 1e-4 * limit);
    }

    #[test]
    fn sobolev_order_zero_is_bergman() {
        let f = mixed();
        let sob = f.norm_sobolev(0.5, 0, TOL).unwrap().value().unwrap();
        assert!(close(sob, f.norm_bergman(0.5, TOL).unwrap(), 1e-9));
    }

    #[test]
    fn sobolev_pluriharmonic_closed_form() {
        // (p, 0): D^k acts as p^k and c_{p0,k}(s) = p^{2k} Γ(n+p)Γ(s+1)/Γ(s+1+n+p)
        let n = 2u32;
        let f = MhFunction::single(2, 3, 0, BigradedPolynomial::monomial(2, &[2, 1], &[0, 0], exact(1, 0)).unwrap())
            .unwrap();
        let norm_h = f.sphere_norms()[0].2;
        let s = 0.0;
        let c = c_0q_closed(n, 3, s).unwrap().value;
        let sigma = (3 * (3 + 2)) as f64;
        for m in 0..=3u32 {
            let mut w = 0.0;
            for l in 0..=m {
                for k in 0..=l {
                    w += sigma.powi((l - k) as i32) * 9f64.powi(k as i32);
                }
            }
            let got = f.norm_sobolev(s, m, TOL).unwrap().value().unwrap();
            assert!(close(got, w * c * norm_h, 1e-9), "m={m}: {got} vs {}", w * c * norm_h);
        }
    }

    #[test]
    fn sobolev_beyond_n_diverges_for_mixed_components() {
        match mixed().norm_sobolev(0.0, 3, TOL).unwrap() {
            SobolevNorm::Divergent { p: 1, q: 1, k: 3 } => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
