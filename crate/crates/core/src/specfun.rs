//! Scalar special functions: log-gamma, digamma, Pochhammer symbols and the
//! Gauss hypergeometric function on `[0, 1)`.
//!
//! `₂F₁(a, b; c; t)` is evaluated by one of four methods:
//!
//! * the power series, for `t ≤ 0.7` (through the Euler transform when one
//!   of `a`, `b` is negative, so that the summands stay positive);
//! * the connection formulas at `t = 1` (logarithmic form when `c − a − b` is
//!   an integer), when `|ab|·(1 − t)` is small;
//! * Taylor stepping along the hypergeometric ODE, otherwise. The step is
//!   capped at the local scale `√((1 − t)/|ab|)`, which keeps the Taylor
//!   coefficient recurrence stable for large parameters.

use std::f64::consts::PI;

use astro_float::BigFloat;

use crate::error::{Error, Result};

/// Maximum number of series terms summed in a single evaluation.
pub const ITERATION_CAP: usize = 100_000;

const SERIES_MAX_T: f64 = 0.7;
const CONNECTION_MAX_X: f64 = 2.0;
const STEP_START: f64 = 0.5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_near_one(x - 1.0);
    }
    if x <= 2.5 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_near_one(z);
    }
    if x < 10.0 {
        let mut prod = 1.0;
        let mut y = x;
        while y < 10.0 {
            prod *= y;
            y += 1.0;
        }
        return stirling(y) - prod.ln();
    }
    stirling(x)
}

fn stirling(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in C {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

/// `ln Γ(1 + z)` for `|z| ≤ 1/2` by its Taylor series in zeta values.
fn ln_gamma_near_one(z: f64) -> f64 {
    let zeta = zeta_table();
    let mut sum = -EULER_GAMMA * z;
    let mut pow = -z;
    for (k, zk) in zeta.iter().enumerate().skip(2) {
        pow *= -z;
        let term = zk * pow / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 4 {
            break;
        }
    }
    sum
}

/// `ζ(k)` for `k = 0..64` (entries 0 and 1 unused), by Euler–Maclaurin.
fn zeta_table() -> &'static [f64; 64] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; 64]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_{2j}/(2j)!
        const B: [f64; 6] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30_240.0,
            -1.0 / 1_209_600.0,
            1.0 / 47_900_160.0,
            -691.0 / 1_307_674_368_000.0,
        ];
        let mut out = [0.0; 64];
        let n = 10.0_f64;
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let s = k as f64;
            let mut sum = 0.0;
            for m in (1..10).rev() {
                sum += (m as f64).powf(-s);
            }
            sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
            // s(s+1)...(s+2j-2) N^{-s-2j+1}
            let mut rising = s;
            let mut pow = n.powf(-s - 1.0);
            for (j, b) in B.iter().enumerate() {
                sum += b * rising * pow;
                let j2 = 2.0 * j as f64;
                rising *= (s + j2 + 1.0) * (s + j2 + 2.0);
                pow /= n * n;
            }
            *slot = sum;
        }
        out
    })
}

/// `sin(πx)` with argument reduction done before scaling by π.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if r <= 0.5 { (PI * r).sin() } else { (PI * (1.0 - r)).sin() };
    sign * v
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `(ln|Γ(x)|, sign Γ(x))`, or `None` at the poles `x ∈ {0, −1, −2, …}`.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma_pos(x), 1.0));
    }
    if is_nonpositive_integer(x) || !x.is_finite() {
        return None;
    }
    let s = sin_pi(x);
    let lg = PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x);
    Some((lg, s.signum()))
}

/// Product of `Γ(num_i)` over product of `Γ(den_j)`, evaluated in log space.
///
/// Denominator poles give 0; numerator poles are an error.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &x in num {
        let (l, s) = ln_gamma_signed(x)
            .ok_or_else(|| Error::domain(format!("Γ pole at {x} in numerator")))?;
        ln += l;
        sign *= s;
    }
    for &x in den {
        match ln_gamma_signed(x) {
            Some((l, s)) => {
                ln -= l;
                sign *= s;
            }
            None => return Ok(0.0),
        }
    }
    Ok(sign * ln.exp())
}

/// Digamma function `ψ(x)`; `x` must not be a non-positive integer.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.round() {
            return f64::NAN;
        }
        let s = sin_pi(x);
        let c = sin_pi(x + 0.5);
        return digamma(1.0 - x) - PI * c / s;
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32_760.0)))));
    acc + y.ln() - 0.5 / y - series
}

/// Rising factorial `(a)_k = a(a+1)…(a+k−1)` for integer `k`, any real `a`.
pub fn rising(a: f64, k: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

/// Pochhammer symbol `(a)_k = Γ(a+k)/Γ(a)` for `a > 0`, `k ≥ 0`.
///
/// Integer `k` uses the rising-factorial product while it stays finite.
pub fn pochhammer(a: f64, k: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("pochhammer requires a > 0, got {a}")));
    }
    if !(k >= 0.0) {
        return Err(Error::domain(format!("pochhammer requires k ≥ 0, got {k}")));
    }
    if k == k.round() && k <= 300.0 {
        let v = rising(a, k as u32);
        if v.is_finite() {
            return Ok(v);
        }
    }
    Ok((ln_gamma_pos(a + k) - ln_gamma_pos(a)).exp())
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)
}

/// Parameters of `₂F₁(a, b; c; ·)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HypParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::domain("non-finite hypergeometric parameter"));
        }
        if is_nonpositive_integer(c) {
            return Err(Error::domain(format!("c = {c} is a non-positive integer")));
        }
        Ok(Self { a, b, c })
    }

    /// `c − a − b`.
    pub fn excess(&self) -> f64 {
        self.c - self.a - self.b
    }
}

/// `₂F₁(a, b; c; t)` for `t ∈ [0, 1)`, relative error about `1e-12`.
pub fn gauss_2f1(params: HypParams, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain(format!("gauss_2f1 requires t in [0,1), got {t}")));
    }
    hyp2f1_tw(params.a, params.b, params.c, t, 1.0 - t)
}

/// `₂F₁(a, b; c; 1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b))`.
pub fn gauss_2f1_at_1(params: HypParams) -> Result<f64> {
    let m = params.excess();
    if !(m > 0.0) {
        return Err(Error::domain(format!("Gauss summation needs c − a − b > 0, got {m}")));
    }
    let HypParams { a, b, c } = params;
    if a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    gamma_ratio(&[c, m], &[c - a, c - b])
}

/// Evaluation with the complement `w = 1 − t` supplied by the caller, so
/// that points very close to 1 keep full relative precision in `w`.
pub(crate) fn hyp2f1_tw(a: f64, b: f64, c: f64, t: f64, w: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("c = {c} is a non-positive integer")));
    }
    if t == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return terminating(a, b, c, t);
    }
    if t <= SERIES_MAX_T {
        let euler = (a < 0.0 || b < 0.0) && c - a > 0.0 && c - b > 0.0;
        if euler {
            return Ok(w.powf(c - a - b) * series(c - a, c - b, c, t)?);
        }
        return series(a, b, c, t);
    }
    let m = c - a - b;
    let mr = m.round();
    if m == mr {
        // Flip to a non-negative excess before using the logarithmic formula.
        let (a2, b2, pre) = if m < 0.0 { (c - a, c - b, w.powf(m)) } else { (a, b, 1.0) };
        if (a2 * b2).abs() * w <= CONNECTION_MAX_X {
            if let Some(v) = connection_integer(a2, b2, mr.abs() as u32, w)? {
                return Ok(pre * v);
            }
        }
    } else if (a * b).abs() * w <= CONNECTION_MAX_X && (m - mr).abs() >= 0.05 {
        return connection_generic(a, b, c, w);
    }
    ode_stepping(a, b, c, t)
}

/// Plain power series, stopping once terms are negligible and decreasing.
fn series(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small = 0;
    for j in 0..ITERATION_CAP {
        let jf = j as f64;
        let ratio = (a + jf) * (b + jf) / ((jf + 1.0) * (c + jf)) * t;
        term *= ratio;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && ratio.abs() < 1.0 {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergence(format!(
        "₂F₁({a}, {b}; {c}; {t}) series exceeded {ITERATION_CAP} terms"
    )))
}

fn terminating(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    let n = if is_nonpositive_integer(a) && (!is_nonpositive_integer(b) || a > b) {
        -a
    } else {
        -b
    };
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..(n as usize) {
        let jf = j as f64;
        if c + jf == 0.0 {
            return Err(Error::domain("terminating series hits c pole"));
        }
        term *= (a + jf) * (b + jf) / ((jf + 1.0) * (c + jf)) * t;
        sum += term;
    }
    Ok(sum)
}

/// Connection formula at `t = 1` for `c = a + b + m`, `m` a non-negative
/// integer (the logarithmic case). Returns `None` if a digamma argument hits
/// a pole, which sends the caller to ODE stepping.
fn connection_integer(a: f64, b: f64, m: u32, w: f64) -> Result<Option<f64>> {
    let mf = m as f64;
    let c = a + b + mf;
    if is_nonpositive_integer(a + mf) || is_nonpositive_integer(b + mf) {
        return Ok(None);
    }
    let mut finite = 0.0;
    if m > 0 {
        let pre = gamma_ratio(&[mf, c], &[a + mf, b + mf])?;
        let mut term = 1.0;
        let mut acc = 1.0;
        for k in 1..m {
            let kf = k as f64;
            // (1 − m)_k grows by the factor (k − m) at step k.
            term *= (a + kf - 1.0) * (b + kf - 1.0) / (kf * (kf - mf)) * w;
            acc += term;
        }
        finite = pre * acc;
    }
    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    let pre2 = sign * gamma_ratio(&[c], &[a, b])? * w.powi(m as i32);
    if pre2 == 0.0 {
        return Ok(Some(finite));
    }
    let mut coef = 1.0 / (1..=m).map(|i| i as f64).product::<f64>();
    let mut bracket = w.ln() - digamma(1.0) - digamma(mf + 1.0) + digamma(a + mf) + digamma(b + mf);
    let mut sum = coef * bracket;
    let mut small = 0;
    for k in 0..ITERATION_CAP {
        let kf = k as f64;
        coef *= (a + mf + kf) * (b + mf + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
        bracket += -1.0 / (kf + 1.0) - 1.0 / (kf + mf + 1.0) + 1.0 / (a + kf + mf) + 1.0 / (b + kf + mf);
        let term = coef * bracket;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small >= 2 {
                return Ok(Some(finite + pre2 * sum));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergence("logarithmic connection series did not converge"))
}

/// Connection formula at `t = 1` for non-integer `c − a − b`.
fn connection_generic(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let m = c - a - b;
    let a1 = gamma_ratio(&[c, m], &[c - a, c - b])?;
    let a2 = gamma_ratio(&[c, -m], &[a, b])?;
    let mut v = 0.0;
    if a1 != 0.0 {
        v += a1 * series_any(a, b, 1.0 - m, w)?;
    }
    if a2 != 0.0 {
        v += a2 * w.powf(m) * series_any(c - a, c - b, 1.0 + m, w)?;
    }
    Ok(v)
}

fn series_any(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        terminating(a, b, c, t)
    } else {
        series(a, b, c, t)
    }
}

/// Analytic continuation from `t = 1/2` by Taylor expansion of the
/// hypergeometric ODE `t(1−t)F'' + [c − (a+b+1)t]F' − abF = 0`.
fn ode_stepping(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    let t0 = STEP_START.min(t);
    let mut f = hyp2f1_tw(a, b, c, t0, 1.0 - t0)?;
    let mut fp = if is_nonpositive_integer(c + 1.0) {
        return Err(Error::domain("derivative parameter hits a pole"));
    } else {
        a * b / c * hyp2f1_tw(a + 1.0, b + 1.0, c + 1.0, t0, 1.0 - t0)?
    };
    let ab = a * b;
    let scale = ab.abs().max(1.0);
    let mut cur = t0;
    let mut budget = ITERATION_CAP;
    while cur < t {
        let w0 = 1.0 - cur;
        let h = (0.5 * w0).min((w0 / scale).sqrt()).min(t - cur);
        let p0 = cur * w0;
        let p1 = 1.0 - 2.0 * cur;
        let q0 = c - (a + b + 1.0) * cur;
        let q1 = -(a + b + 1.0);
        let (mut g0, mut g1) = (f, fp);
        let mut sum_f = g0 + g1 * h;
        let mut sum_d = g1;
        let mut hk = h;
        let mut small = 0;
        let mut k = 0usize;
        loop {
            let kf = k as f64;
            let g2 = -((p1 * kf * (kf + 1.0) + q0 * (kf + 1.0)) * g1 + (-kf * (kf - 1.0) + q1 * kf - ab) * g0)
                / (p0 * (kf + 1.0) * (kf + 2.0));
            let hk1 = hk * h;
            sum_f += g2 * hk1;
            sum_d += (kf + 2.0) * g2 * hk;
            g0 = g1;
            g1 = g2;
            hk = hk1;
            k += 1;
            if (g2 * hk1).abs() <= 1e-17 * sum_f.abs() {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            if k >= budget {
                return Err(Error::non_convergence(format!(
                    "₂F₁({a}, {b}; {c}; {t}) continuation exceeded {ITERATION_CAP} terms"
                )));
            }
        }
        budget -= k;
        f = sum_f;
        fp = sum_d;
        cur += h;
    }
    Ok(f)
}

/// `₂F₁(p, q; p+q+n; 1−u) / ₂F₁(p, q; p+q+n; 1)` for non-integer `n > 0`
/// by the two-lattice expansion about `t = 1`.
pub fn ratio_series_around_1(p: u32, q: u32, n: f64, u: f64) -> Result<f64> {
    if !(n > 0.0) || n == n.round() {
        return Err(Error::domain(format!("ratio_series_around_1 needs non-integer n > 0, got {n}")));
    }
    if p == 0 || q == 0 {
        return Err(Error::domain("ratio_series_around_1 needs p, q ≥ 1"));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::domain(format!("u must lie in [0,1), got {u}")));
    }
    if u == 0.0 {
        return Ok(1.0);
    }
    let (pf, qf) = (p as f64, q as f64);
    let first_ratio = |k: f64| (pf + k) * (qf + k) / ((1.0 - n + k) * (k + 1.0)) * u;
    let second_ratio = |j: f64| (pf + n + j) * (qf + n + j) / ((j + 1.0) * (n + j + 1.0)) * u;
    // The two sums cancel down to a value in (0, 1] from terms that can be
    // many orders of magnitude larger, so they are added in a working
    // precision chosen from the f64 term sizes.
    let start = gamma_ratio(&[pf + n, qf + n, 1.0 - n], &[pf, qf, 1.0 + n])? * u.powf(n);
    // the ratio is at least its value (n)_p (n)_q / (n)_{p+q} at u = 1
    let floor = (0..q).map(|i| (n + i as f64) / (n + pf + i as f64)).product::<f64>();
    let cut = 1e-20 * floor;
    let (len1, mag1) = lattice_extent(1.0, cut, first_ratio)?;
    let (len2, mag2) = lattice_extent(start.abs(), cut, second_ratio)?;
    let digits = ((mag1 + mag2) / floor).log2().max(0.0).ceil() as usize;
    let prec = (digits + 128).next_multiple_of(64);
    if prec > MAX_LATTICE_BITS {
        return Err(Error::non_convergence(format!(
            "two-lattice sum cancels across 2^{digits}; needs more than {MAX_LATTICE_BITS} bits"
        )));
    }
    let mut x = Lattice::new(prec);
    let (pb, qb, nb, ub) = (x.num(pf), x.num(qf), x.num(n), x.num(u));
    let one = x.num(1.0);
    let first = x.sum(one.clone(), len1, |x, k| {
        let k = x.num(k as f64);
        let num = x.mul(&x.add(&pb, &k), &x.add(&qb, &k));
        let den = x.mul(&x.add(&x.sub(&one, &nb), &k), &x.add(&k, &one));
        x.mul(&x.div(&num, &den), &ub)
    });
    // Γ(p+n)Γ(q+n)Γ(1−n)/(Γ(p)Γ(q)Γ(1+n)) = (n+1)_{p−1} (n)_q π / ((p−1)! (q−1)! sin πn)
    let (pi, sin) = (x.pi(), x.sin_pi(&nb));
    let mut pre = x.div(&pi, &sin);
    for i in 1..p {
        pre = x.div(&x.mul(&pre, &x.add(&nb, &x.num(i as f64))), &x.num(i as f64));
    }
    for i in 0..q {
        pre = x.mul(&pre, &x.add(&nb, &x.num(i as f64)));
        if i > 0 {
            pre = x.div(&pre, &x.num(i as f64));
        }
    }
    let un = x.pow(&ub, &nb);
    let head = x.mul(&pre, &un);
    let second = x.sum(head, len2, |x, j| {
        let j = x.num(j as f64);
        let num = x.mul(&x.add(&x.add(&pb, &nb), &j), &x.add(&x.add(&qb, &nb), &j));
        let den = x.mul(&x.add(&j, &one), &x.add(&x.add(&nb, &j), &one));
        x.mul(&x.div(&num, &den), &ub)
    });
    x.to_f64(&x.sub(&first, &second))
}

const MAX_LATTICE_BITS: usize = 8192;

/// Number of terms a lattice series needs to get below `cut` and the sum
/// of their absolute values, both from an f64 pass.
fn lattice_extent(start: f64, cut: f64, ratio: impl Fn(f64) -> f64) -> Result<(usize, f64)> {
    let mut term = start;
    let mut mag = start.abs();
    let mut small = 0;
    for k in 0..ITERATION_CAP {
        let r = ratio(k as f64);
        term *= r;
        mag += term.abs();
        if !mag.is_finite() {
            return Err(Error::non_convergence("lattice terms overflow f64"));
        }
        if term.abs() <= cut && r.abs() < 1.0 {
            small += 1;
            if small >= 2 {
                return Ok((k + 1, mag));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergence("lattice series exceeded the iteration cap"))
}

/// Fixed-precision arithmetic for the lattice sums.
struct Lattice {
    prec: usize,
    consts: astro_float::Consts,
}

impl Lattice {
    const RM: astro_float::RoundingMode = astro_float::RoundingMode::ToEven;

    fn new(prec: usize) -> Self {
        Self { prec, consts: astro_float::Consts::new().expect("constant cache") }
    }

    fn num(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, Self::RM)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, Self::RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, Self::RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, Self::RM)
    }

    fn pi(&mut self) -> BigFloat {
        self.consts.pi(self.prec, Self::RM)
    }

    fn sin_pi(&mut self, x: &BigFloat) -> BigFloat {
        let pi = self.pi();
        let arg = self.mul(&pi, x);
        arg.sin(self.prec, Self::RM, &mut self.consts)
    }

    fn pow(&mut self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.pow(y, self.prec, Self::RM, &mut self.consts)
    }

    /// `start · (1 + r₀ + r₀r₁ + …)` over `len` ratios.
    fn sum(&self, start: BigFloat, len: usize, ratio: impl Fn(&Self, usize) -> BigFloat) -> BigFloat {
        let mut term = start.clone();
        let mut acc = start;
        for k in 0..len {
            term = self.mul(&term, &ratio(self, k));
            acc = self.add(&acc, &term);
        }
        acc
    }

    fn to_f64(&mut self, x: &BigFloat) -> Result<f64> {
        let text = x
            .format(astro_float::Radix::Dec, Self::RM, &mut self.consts)
            .map_err(|e| Error::non_convergence(format!("lattice sum: {e:?}")))?;
        text.parse().map_err(|_| Error::non_convergence(format!("lattice sum is not a number: {text}")))
    }
}
