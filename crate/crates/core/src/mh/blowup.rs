use crate::error::{Error, Result};
use crate::radial::RadialProfile;
use crate::specfun::gamma_ratio;

/// Largest radius accepted by [`blowup_profile`].
pub const BLOWUP_R_MAX: f64 = 1.0 - 1e-6;

/// `N^{n+1}[r^{p+q} ₂F₁(p, q; p+q+n; r²)]` along `r_grid`, with
/// `N = r d/dr`. For `pq > 0` this grows like `C/(1−r)` with
/// `C =` [`blowup_constant`].
pub fn blowup_profile(n: u32, p: u32, q: u32, r_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if p == 0 || q == 0 {
        return Err(Error::precondition("the blow-up profile needs p ≥ 1 and q ≥ 1"));
    }
    let prof = RadialProfile::new(n as f64, p, q)?;
    let k = n + 1;
    r_grid
        .iter()
        .map(|&r| {
            if !(r > 0.0 && r <= BLOWUP_R_MAX) {
                return Err(Error::domain(format!("radius {r} outside (0, 1 − 10⁻⁶]")));
            }
            let v = prof.unnormalized_derivatives_tw(k, r * r, (1.0 - r) * (1.0 + r))?;
            Ok((r, v[k as usize]))
        })
        .collect()
}

/// `2ⁿ Γ(p+q+n) / (Γ(p) Γ(q))`.
pub fn blowup_constant(n: u32, p: u32, q: u32) -> Result<f64> {
    let (n, p, q) = (n as f64, p as f64, q as f64);
    Ok(2f64.powf(n) * gamma_ratio(&[p + q + n], &[p, q])?)
}
