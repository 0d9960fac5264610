//! Grid sweeps of `c_pq(s)` over `(p, q, s)` cells.
//!
//! Cells are independent, so they are evaluated through [`par_map`]; rows
//! are assembled afterwards in `(p, q, s)` order, which makes the output
//! identical in every execution mode. Since `c_pq = c_qp`, only cells with
//! `p ≤ q` are computed when the mirror cell is also on the grid.
//!
//! A requested route that needs `pq > 0` is replaced by the closed form on
//! the axes `pq = 0`; the `route` column shows what was used.

use serde::Serialize;

use crate::coeffs::{c_pq, CoeffRequest, Route};
use crate::error::{Error, Result};
use crate::parallel::{par_map, ExecutionMode};
use crate::quadrature::DEFAULT_REL_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: u32,
    pub s: Vec<f64>,
    pub p_max: u32,
    pub q_max: u32,
    pub route: Route,
    pub rel_tol: f64,
    pub mode: ExecutionMode,
}

impl SweepConfig {
    pub fn new(n: u32, s: Vec<f64>, p_max: u32, q_max: u32) -> Self {
        Self { n, s, p_max, q_max, route: Route::Auto, rel_tol: DEFAULT_REL_TOL, mode: ExecutionMode::default() }
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_mode(mut self, mode: ExecutionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        if self.s.is_empty() {
            return Err(Error::Invalid("at least one s value is required".into()));
        }
        if let Some(s) = self.s.iter().find(|s| !s.is_finite()) {
            return Err(Error::Invalid(format!("s = {s} is not finite")));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::Invalid(format!("tolerance {} outside (0, 1e-2]", self.rel_tol)));
        }
        Ok(())
    }

    fn cells(&self) -> impl Iterator<Item = (u32, u32, usize)> + '_ {
        (0..=self.p_max).flat_map(move |p| (0..=self.q_max).flat_map(move |q| (0..self.s.len()).map(move |i| (p, q, i))))
    }
}

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: u32,
    pub q: u32,
    pub s: f64,
    pub value: f64,
    pub err_est: f64,
    pub route: Route,
    /// `(p+1)^{s+1} (q+1)^{s+1} c_pq(s)`.
    pub normalized_value: f64,
}

/// The first failing cell of a sweep, in row order.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cell (p = {p}, q = {q}, s = {s}): {error}")]
pub struct CellError {
    pub p: u32,
    pub q: u32,
    pub s: f64,
    pub error: Error,
}

pub fn sweep_coefficients(cfg: &SweepConfig) -> std::result::Result<Vec<SweepRow>, CellError> {
    cfg.validate().map_err(|e| CellError { p: 0, q: 0, s: cfg.s.first().copied().unwrap_or(f64::NAN), error: e })?;
    let mirrored = |p: u32, q: u32| p > q && p <= cfg.q_max && q <= cfg.p_max;
    let work: Vec<(u32, u32, usize)> = cfg.cells().filter(|&(p, q, _)| !mirrored(p, q)).collect();
    let results = par_map(cfg.mode, &work, |&(p, q, i)| {
        // the two-variable routes need pq > 0; the axes always have the closed form
        let route = match cfg.route {
            Route::DoubleIntegral | Route::SeriesNoninteger if p * q == 0 => Route::ClosedP0,
            r => r,
        };
        c_pq(&CoeffRequest::new(cfg.n, p, q, cfg.s[i]).with_route(route).with_tol(cfg.rel_tol))
    });
    let lookup = |p: u32, q: u32, i: usize| {
        let idx = work.binary_search(&(p, q, i)).expect("computed cell");
        &results[idx]
    };
    let mut rows = Vec::with_capacity(work.len());
    for (p, q, i) in cfg.cells() {
        let s = cfg.s[i];
        let res = if mirrored(p, q) { lookup(q, p, i) } else { lookup(p, q, i) };
        let c = res.clone().map_err(|e| CellError { p, q, s, error: e })?;
        let scale = ((p + 1) as f64 * (q + 1) as f64).powf(s + 1.0);
        rows.push(SweepRow {
            p,
            q,
            s,
            value: c.value,
            err_est: c.err_est,
            route: c.route_used,
            normalized_value: scale * c.value,
        });
    }
    Ok(rows)
}

/// `max/min` of `f(p, q)` over the square `lo ≤ p, q ≤ hi`; NaN values
/// are skipped.
pub fn window_spread(lo: u32, hi: u32, mut f: impl FnMut(u32, u32) -> f64) -> f64 {
    let (mut min, mut max) = (f64::INFINITY, 0.0f64);
    for p in lo..=hi {
        for q in lo..=hi {
            let v = f(p, q);
            min = min.min(v);
            max = max.max(v);
        }
    }
    max / min
}

/// Spreads of a normalized quantity over a lower and an upper window of a
/// grid. Boundedness `≍` shows up as spreads that settle as the window
/// moves outward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stabilization {
    pub full: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Stabilization {
    /// Relative change `|upper − lower| / lower`.
    pub fn change(&self) -> f64 {
        (self.upper - self.lower).abs() / self.lower
    }
}

/// Windows `[16, 32]²` and `[32, 64]²` inside `[0, 64]²`.
pub const STABILIZATION_WINDOWS: [(u32, u32); 2] = [(16, 32), (32, 64)];

/// Evaluates `f` on `[lo, 64]²` (pairs with `p > q` taken from their
/// mirror, the origin left out) and reports the spreads over the full grid
/// and both windows.
pub fn stabilization(
    mode: ExecutionMode,
    lo: u32,
    f: impl Fn(u32, u32) -> Result<f64> + Sync + Send,
) -> Result<Stabilization> {
    let hi = STABILIZATION_WINDOWS[1].1;
    let cells: Vec<(u32, u32)> =
        (lo..=hi).flat_map(|p| (p..=hi).map(move |q| (p, q))).filter(|&(p, q)| p + q > 0).collect();
    let vals: Vec<f64> = par_map(mode, &cells, |&(p, q)| f(p, q)).into_iter().collect::<Result<_>>()?;
    let width = (hi - lo + 1) as usize;
    let mut grid = vec![f64::NAN; width * width];
    for (&(p, q), v) in cells.iter().zip(vals) {
        let (i, j) = ((p - lo) as usize, (q - lo) as usize);
        grid[i * width + j] = v;
        grid[j * width + i] = v;
    }
    let at = |p: u32, q: u32| grid[(p - lo) as usize * width + (q - lo) as usize];
    let [(a0, a1), (b0, b1)] = STABILIZATION_WINDOWS;
    Ok(Stabilization { full: window_spread(lo, hi, at), lower: window_spread(a0, a1, at), upper: window_spread(b0, b1, at) })
}
