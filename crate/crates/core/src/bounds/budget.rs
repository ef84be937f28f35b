use std::f64::consts::PI;

use serde::Serialize;

use super::arg::arg_exact;
use super::peak::peak_error_bound;
use super::tail::tail_error_bound;
use crate::error::{domain, Error, Result};
use crate::numeric::bisect_predicate;
use crate::saddle::{r_floor, solve_radius, stationary_lhs};

/// Smallest `n` for which the peak and tail bounds are used.
pub const ANALYTIC_MIN_N: u64 = 547;

/// Bisection tolerance on `r` in [`mstar`].
pub const MSTAR_R_TOL: f64 = 1e-10;

/// Peak error, tail error and cosine floor for one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub n: u64,
    pub m: u64,
    pub delta: u32,
    pub r: f64,
    pub eps0: f64,
    pub eps1: f64,
    /// `|2cos(δ·arg P_n(r e^{2πi/3}) − 2mπ/3)|` at the radius `r`.
    pub cos_floor: f64,
    /// The uniform constant of [`cos_floor`] for this `(δ, m)`.
    pub cos_floor_uniform: f64,
    pub margin: f64,
    pub verdict: bool,
}

fn check_delta(delta: u32) -> Result<()> {
    if !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must be 1..=3, got {delta}")));
    }
    Ok(())
}

fn check_residue(delta: u32, m: u64) -> Result<()> {
    if delta == 3 && m % 3 == 2 {
        return Err(Error::Unsupported(format!(
            "delta = 3 with m = {m} ≡ 2 (mod 3): the cosine factor has no positive lower bound"
        )));
    }
    Ok(())
}

/// Uniform lower bound for `|2cos(x − 2mπ/3)|` over `x ∈ [−δπ/18, 0]`:
/// `2min(1/2, cos(7π/18))` for `δ = 1`, `2cos(4π/9)` for `δ = 2` and `1` for
/// `δ = 3` with `m ≢ 2 (mod 3)`.
pub fn cos_floor(delta: u32, m: u64) -> Result<f64> {
    check_delta(delta)?;
    check_residue(delta, m)?;
    Ok(match delta {
        1 => 2.0 * (0.5f64).min((7.0 * PI / 18.0).cos()),
        2 => 2.0 * (4.0 * PI / 9.0).cos(),
        _ => 1.0,
    })
}

/// `|2cos(δ·arg_exact(n, r) − 2mπ/3)|`.
pub fn cos_value(n: u64, r: f64, delta: u32, m: u64) -> Result<f64> {
    check_delta(delta)?;
    let x = delta as f64 * arg_exact(n, r)?;
    Ok((2.0 * (x - 2.0 * PI * (m % 3) as f64 / 3.0).cos()).abs())
}

/// Minimum of [`cos_value`] over the residues the bound supports
/// (`0, 1, 2` for `δ ≤ 2`, `0, 1` for `δ = 3`).
pub fn uniform_cos_value(n: u64, r: f64, delta: u32) -> Result<f64> {
    let top = if delta == 3 { 2 } else { 3 };
    let mut best = f64::INFINITY;
    for res in 0..top {
        best = best.min(cos_value(n, r, delta, res)?);
    }
    Ok(best)
}

/// `ε₀ + ε₁ < |2cos(arg − 2mπ/3)|` at `r = solve_radius(n, m, δ)`.
///
/// Requires `n ≥ 547` and `3n ≤ m ≤ δ·3n²/2`. A true verdict means the sign of
/// `[q^m] P_n^δ` is the one of `2cos(δ·arg − 2mπ/3)`.
pub fn final_inequality(n: u64, m: u64, delta: u32) -> Result<ErrorBudget> {
    check_delta(delta)?;
    if n < ANALYTIC_MIN_N {
        return Err(domain!("the analytic bounds need n >= {ANALYTIC_MIN_N}, got {n}"));
    }
    let centre = delta as u64 * 3 * n * n / 2;
    if m < 3 * n || m > centre {
        return Err(domain!("m = {m} outside [3n, δ·3n²/2] = [{}, {centre}]", 3 * n));
    }
    check_residue(delta, m)?;
    let r = solve_radius(n, m, delta)?;
    let eps0 = peak_error_bound(n, r, delta)?;
    let eps1 = tail_error_bound(n, r, delta)?;
    let floor = cos_value(n, r, delta, m)?;
    let margin = floor - eps0 - eps1;
    Ok(ErrorBudget {
        n,
        m,
        delta,
        r,
        eps0,
        eps1,
        cos_floor: floor,
        cos_floor_uniform: cos_floor(delta, m)?,
        margin,
        verdict: margin > 0.0,
    })
}

/// Threshold radius and coefficient index from [`mstar`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MStar {
    pub n: u64,
    pub delta: u32,
    pub rstar: f64,
    pub mstar: u64,
}

fn holds_at(n: u64, r: f64, delta: u32) -> bool {
    let eval = || -> Result<f64> {
        Ok(uniform_cos_value(n, r, delta)? - peak_error_bound(n, r, delta)? - tail_error_bound(n, r, delta)?)
    };
    matches!(eval(), Ok(m) if m > 0.0)
}

/// Smallest `m*` such that the inequality holds for every supported
/// `m ∈ [m*, δ·3n²/2]`.
///
/// Both error bounds decrease in `r` and the cosine factor increases, so the
/// admissible radii form an interval `[r*, 1]`; `r*` is located by bisection to
/// [`MSTAR_R_TOL`] and returned as the upper end of the final bracket. Then
/// `m* = ⌈(δ/2) Σ_{3∤k≤3n} k u₁(r*^k)⌉`. When the inequality already holds at
/// `r₀`, `r* = r₀`. `Ok(None)` means the bounds are too weak on all of `[r₀, 1]`.
pub fn mstar(n: u64, delta: u32) -> Result<Option<MStar>> {
    check_delta(delta)?;
    if n < ANALYTIC_MIN_N {
        return Err(domain!("the analytic bounds need n >= {ANALYTIC_MIN_N}, got {n}"));
    }
    let r0 = r_floor(n, delta);
    let rstar = if holds_at(n, r0, delta) {
        r0
    } else if !holds_at(n, 1.0, delta) {
        return Ok(None);
    } else {
        bisect_predicate(r0, 1.0, MSTAR_R_TOL, |r| holds_at(n, r, delta)).1
    };
    let m = (0.5 * delta as f64 * stationary_lhs(n, rstar).0).ceil() as u64;
    Ok(Some(MStar { n, delta, rstar, mstar: m }))
}
