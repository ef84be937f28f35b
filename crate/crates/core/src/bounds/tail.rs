use std::f64::consts::PI;

use crate::certify::erf;
use crate::error::{domain, Error, Result};
use crate::numeric::{adaptive_simpson, pow_ratio};
use crate::saddle::{r_floor, CUTOFF_C0};

/// Upper end of the `ρ`-integral in the tail bound.
pub const TAIL_RHO_MAX: f64 = 4.0;

/// `φ(n, r, ρ) = r³(1+r³)/6 · (1 − 1/√(1+18ρ²)) · (1 − r^{n/2})/(1 − r³)`.
pub fn tail_phi(n: u64, r: f64, rho: f64) -> f64 {
    let r3 = r * r * r;
    r3 * (1.0 + r3) / 6.0 * (1.0 - 1.0 / (1.0 + 18.0 * rho * rho).sqrt()) * pow_ratio(r, n as f64 / 2.0, 3.0)
}

const TAIL_PANELS: usize = 64;

/// Tail error bound
///
/// `ε₁ ≤ P · (4√A ∫_{10/81}^{4} exp(0.8δ/(√3 − (1+3ρ)(−log r₀)) − δφ(ρ)) dρ
///        + 2π A^{3/2} exp(5.44δ − δφ(4)))`
///
/// with `A = (1 − r^{3n})/(1 − r³)` and `P = √(54δ/(5π)) / erf(√(40δA/243))`.
/// The `ρ`-integral uses adaptive Simpson on 64 equal panels with total
/// absolute tolerance `10⁻⁹`.
pub fn tail_error_bound(n: u64, r: f64, delta: u32) -> Result<f64> {
    if !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must be 1..=3, got {delta}")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain!("radius {r} outside (0, 1]"));
    }
    let d = delta as f64;
    let l0 = -r_floor(n, delta).ln();
    let s3 = 3f64.sqrt();
    if s3 - (1.0 + 3.0 * TAIL_RHO_MAX) * l0 <= 0.0 {
        return Err(domain!("n = {n} too small: the tail exponent is singular on [10/81, 4]"));
    }
    let a = pow_ratio(r, 3.0 * n as f64, 3.0);
    let pre = (54.0 * d / (5.0 * PI)).sqrt() / erf((40.0 * d * a / 243.0).sqrt());
    let integrand = |rho: f64| (0.8 * d / (s3 - (1.0 + 3.0 * rho) * l0) - d * tail_phi(n, r, rho)).exp();
    let h = (TAIL_RHO_MAX - CUTOFF_C0) / TAIL_PANELS as f64;
    let integral: f64 = (0..TAIL_PANELS)
        .map(|k| {
            let a = CUTOFF_C0 + h * k as f64;
            adaptive_simpson(integrand, a, a + h, 1e-9 / TAIL_PANELS as f64)
        })
        .sum();
    let far = 2.0 * PI * a.powf(1.5) * (5.44 * d - d * tail_phi(n, r, TAIL_RHO_MAX)).exp();
    Ok(pre * (4.0 * a.sqrt() * integral + far))
}
