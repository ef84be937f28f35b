use num_complex::Complex64;
use serde::Serialize;

use crate::certify::beta;
use crate::error::{domain, Error, Result};
use crate::saddle::{cutoff_theta0, r_floor, x_vector};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Grid size used for the `β_i` values inside [`gaussian_error_bound`].
pub const AUDIT_BETA_GRID: usize = 20_000;

/// Bounds on the Taylor data of `log f` around the peak: `|f_1|`, `f_2`,
/// `|f_3|`, `|f_4|` and the window `[−x₀, x₀]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianApproxInputs {
    pub f1: f64,
    pub f2_re: f64,
    pub f2_im: f64,
    pub f3: f64,
    pub f4: f64,
    /// `g = −Re f_2`.
    pub g: f64,
    pub x0: f64,
    /// `μ₃ = x₀ f₃/(3g)`.
    pub mu3: f64,
    /// `μ₄ = x₀ √(f₄/(8g))`.
    pub mu4: f64,
}

impl GaussianApproxInputs {
    pub fn new(f1: f64, f2: Complex64, f3: f64, f4: f64, x0: f64) -> Result<Self> {
        let g = -f2.re;
        if !(g > 0.0) {
            return Err(Error::InvalidParams(format!("need Re f2 < 0, got {}", f2.re)));
        }
        if !(x0 > 0.0) || f1 < 0.0 || f3 < 0.0 || f4 < 0.0 {
            return Err(Error::InvalidParams("need x0 > 0 and nonnegative f1, f3, f4".into()));
        }
        Ok(Self {
            f1,
            f2_re: f2.re,
            f2_im: f2.im,
            f3,
            f4,
            g,
            x0,
            mu3: x0 * f3 / (3.0 * g),
            mu4: x0 * (f4 / (8.0 * g)).sqrt(),
        })
    }
}

/// Relative error of the Gaussian approximation on `[−x₀, x₀]`:
///
/// `cosh(f₁x₀) · [ (|Im f₂| + f₁²)/(2g) + 4f₃²β₁(μ₃)/(9√π g³) + f₄β₃(μ₄)/(3√π g²)
///   + 4f₁f₃β₂(μ₃)/(3√π g²) + √2 f₁f₄β₄(μ₄)/(3√π g^{5/2}) ]`.
///
/// Terms whose `f₃` or `f₄` vanish are dropped together with the corresponding
/// `μ` condition; otherwise `μ₃, μ₄ ∈ (0, 1)` is required.
pub fn gaussian_error_bound(inp: &GaussianApproxInputs) -> Result<f64> {
    let g = inp.g;
    let mut terms = (inp.f2_im.abs() + inp.f1 * inp.f1) / (2.0 * g);
    if inp.f3 > 0.0 {
        if !(inp.mu3 > 0.0 && inp.mu3 < 1.0) {
            return Err(domain!("mu3 = {} outside (0, 1); shrink x0", inp.mu3));
        }
        let b1 = beta(1, inp.mu3, AUDIT_BETA_GRID)?.value;
        let b2 = beta(2, inp.mu3, AUDIT_BETA_GRID)?.value;
        terms += 4.0 * inp.f3 * inp.f3 * b1 / (9.0 * SQRT_PI * g.powi(3));
        terms += 4.0 * inp.f1 * inp.f3 * b2 / (3.0 * SQRT_PI * g * g);
    }
    if inp.f4 > 0.0 {
        if !(inp.mu4 > 0.0 && inp.mu4 < 1.0) {
            return Err(domain!("mu4 = {} outside (0, 1); shrink x0", inp.mu4));
        }
        let b3 = beta(3, inp.mu4, AUDIT_BETA_GRID)?.value;
        let b4 = beta(4, inp.mu4, AUDIT_BETA_GRID)?.value;
        terms += inp.f4 * b3 / (3.0 * SQRT_PI * g * g);
        terms += 2f64.sqrt() * inp.f1 * inp.f4 * b4 / (3.0 * SQRT_PI * g.powf(2.5));
    }
    Ok((inp.f1 * inp.x0).cosh() * terms)
}

fn check_peak_domain(n: u64, r: f64, delta: u32) -> Result<()> {
    if !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must be 1..=3, got {delta}")));
    }
    if n < 400 {
        return Err(domain!("the derivative bounds need n >= 400, got {n}"));
    }
    let r0 = r_floor(n, delta);
    if !(r <= 1.0 && r >= r0 * (1.0 - 1e-15)) {
        return Err(domain!("radius {r} outside [r0, 1] = [{r0}, 1]"));
    }
    Ok(())
}

/// Worst-case Taylor data at `(n, r, δ)`: `f₁ = (7/40)δX₀`, `f₂ = −(1/3)δX₂ + i(1/3)δX₁`,
/// `f₃ = (2/3)δX₃`, `f₄ = (18/25)δX₄`, `x₀ = θ₀`, with `g` at its lower bound.
pub fn fj_bounds(n: u64, r: f64, delta: u32) -> Result<GaussianApproxInputs> {
    check_peak_domain(n, r, delta)?;
    let x = x_vector(n, r)?;
    let d = delta as f64;
    GaussianApproxInputs::new(
        7.0 / 40.0 * d * x[0],
        Complex64::new(-d * x[2] / 3.0, d * x[1] / 3.0),
        2.0 / 3.0 * d * x[3],
        18.0 / 25.0 * d * x[4],
        cutoff_theta0(n, r),
    )
}

/// Closed-form peak error `(146.2/δ + 6.46 + 0.124δ) X₁/X₂ + 7.222/√(δX₂)`.
pub fn peak_error_bound(n: u64, r: f64, delta: u32) -> Result<f64> {
    check_peak_domain(n, r, delta)?;
    let x = x_vector(n, r)?;
    let d = delta as f64;
    Ok((146.2 / d + 6.46 + 0.124 * d) * x[1] / x[2] + 7.222 / (d * x[2]).sqrt())
}

/// The peak error recomposed from [`fj_bounds`] and [`gaussian_error_bound`];
/// the factor 2 accounts for the two conjugate peaks.
pub fn peak_error_audit(n: u64, r: f64, delta: u32) -> Result<f64> {
    Ok(2.0 * gaussian_error_bound(&fj_bounds(n, r, delta)?)?)
}
