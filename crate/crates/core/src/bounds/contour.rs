use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::certify::erf;
use crate::error::{domain, Error, Result};
use crate::numeric::GaussLegendre;
use crate::qseries::borwein_poly;
use crate::saddle::{cutoff_theta0, log_borwein, third_root, SaddleContext};

/// Slack allowed in [`fundamental_check`] for quadrature error.
pub const FUNDAMENTAL_SLACK: f64 = 1e-6;

const GL_ORDER: usize = 16;

/// Trapezoidal approximation of a coefficient by Cauchy's formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourValue {
    pub re: f64,
    /// Should vanish up to rounding; reported as a diagnostic.
    pub im: f64,
}

/// The same trapezoidal sum split into the peak windows `|θ ∓ 2π/3| ≤ θ₀` and the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSplit {
    pub whole: ContourValue,
    pub peak: ContourValue,
    pub tail: ContourValue,
    pub theta0: f64,
}

fn check_contour(n: u64, delta: u32, r: f64, num_points: usize) -> Result<()> {
    if n == 0 || !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("need n >= 1 and delta in 1..=3, got n={n}, delta={delta}")));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain!("radius {r} outside (0, 1]"));
    }
    if num_points < 4 {
        return Err(Error::Contract(format!("need at least 4 points, got {num_points}")));
    }
    Ok(())
}

/// Recommended number of nodes: comfortably above the degree `3δn²`.
pub fn default_points(n: u64, delta: u32) -> usize {
    (4 * 3 * delta as u64 * n * n + 16) as usize
}

fn node_terms(n: u64, m: u64, delta: u32, r: f64, num_points: usize) -> Vec<(f64, Complex64)> {
    let lr = r.ln();
    (0..num_points)
        .into_par_iter()
        .map(|j| {
            let th = -PI + 2.0 * PI * j as f64 / num_points as f64;
            let z = Complex64::from_polar(r, th);
            let l = log_borwein(n, delta, z) - Complex64::new(m as f64 * lr, m as f64 * th);
            (th, l.exp() / num_points as f64)
        })
        .collect()
}

fn value(z: Complex64) -> ContourValue {
    ContourValue { re: z.re, im: z.im }
}

/// `(r^{−m}/N) Σ_j P_n^δ(r e^{iθ_j}) e^{−imθ_j}` over `N = num_points` equispaced nodes.
///
/// The sum is exact up to aliasing by `c_{m ± N}`, so `N` above the degree gives
/// the coefficient up to rounding. Terms are formed in log space.
pub fn contour_coefficient(n: u64, m: u64, delta: u32, r: f64, num_points: usize) -> Result<ContourValue> {
    check_contour(n, delta, r, num_points)?;
    let terms = node_terms(n, m, delta, r, num_points);
    Ok(value(terms.iter().map(|t| t.1).sum()))
}

/// [`contour_coefficient`] together with its peak and tail parts at `θ₀(n, r)`.
pub fn contour_split(n: u64, m: u64, delta: u32, r: f64, num_points: usize) -> Result<ContourSplit> {
    check_contour(n, delta, r, num_points)?;
    let theta0 = cutoff_theta0(n, r);
    let c = 2.0 * PI / 3.0;
    let terms = node_terms(n, m, delta, r, num_points);
    let mut whole = Complex64::new(0.0, 0.0);
    let mut peak = Complex64::new(0.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    for (th, t) in terms {
        whole += t;
        if (th - c).abs() <= theta0 || (th + c).abs() <= theta0 {
            peak += t;
        } else {
            tail += t;
        }
    }
    Ok(ContourSplit { whole: value(whole), peak: value(peak), tail: value(tail), theta0 })
}

/// Gaussian normalisation `√g / (√(2π) erf(θ₀√(g/2)))`.
fn normaliser(ctx: &SaddleContext) -> f64 {
    ctx.g.sqrt() / ((2.0 * PI).sqrt() * erf(ctx.theta0 * (ctx.g / 2.0).sqrt()))
}

/// Peak error measured by quadrature:
/// `2 |c ∫_{−θ₀}^{θ₀} (P(re^{i(θ+2π/3)})/P(re^{2πi/3}) e^{−imθ} − e^{−gθ²/2}) dθ|`
/// with `c` the Gaussian normalisation.
pub fn eps0_direct(ctx: &SaddleContext) -> f64 {
    let (n, m, delta, r, g, t0) = (ctx.n, ctx.m, ctx.delta, ctx.r, ctx.g, ctx.theta0);
    let w = third_root() * r;
    let base = log_borwein(n, delta, w);
    let panels = 64 + (4.0 * m as f64 * t0) as usize;
    let gl = GaussLegendre::new(GL_ORDER);
    let integral: Complex64 = gl.integrate_composite(-t0, t0, panels, |th| {
        let z = w * Complex64::from_polar(1.0, th);
        (log_borwein(n, delta, z) - base - Complex64::new(0.0, m as f64 * th)).exp()
            - Complex64::new((-0.5 * g * th * th).exp(), 0.0)
    });
    2.0 * (normaliser(ctx) * integral).norm()
}

/// Tail error measured by quadrature:
/// `c ∫_{I_tail} |P(re^{iθ})/P(re^{2πi/3})| dθ` over `[−π, π]` minus both peak windows.
pub fn eps1_direct(ctx: &SaddleContext) -> f64 {
    let (n, delta, r, t0) = (ctx.n, ctx.delta, ctx.r, ctx.theta0);
    let base = log_borwein(n, delta, third_root() * r).re;
    let c = 2.0 * PI / 3.0;
    let segments = [(-PI, -c - t0), (-c + t0, c - t0), (c + t0, PI)];
    let gl = GaussLegendre::new(GL_ORDER);
    let total: f64 = segments
        .par_iter()
        .map(|&(a, b)| {
            let panels = ((8 * 3 * n) as f64 * (b - a) / PI).ceil().max(8.0) as usize;
            gl.integrate_composite(a, b, panels, |th: f64| {
                (log_borwein(n, delta, Complex64::from_polar(r, th)).re - base).exp()
            })
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    normaliser(ctx) * total
}

/// Measured approximation error against the two measured error terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalCheck {
    pub n: u64,
    pub m: u64,
    pub delta: u32,
    pub r: f64,
    pub coefficient: f64,
    /// `|c_m r^m √(2πg) / (erf(θ₀√(g/2)) |P(re^{2πi/3})|) − 2cos(γ − 2mπ/3)|`.
    pub lhs: f64,
    /// `2cos(γ − 2mπ/3)`, the predicted sign and size of the normalised coefficient.
    pub main: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub holds: bool,
}

/// Checks `lhs ≤ ε₀ + ε₁ + 10⁻⁶` for the exact coefficient of `P_n^δ`, with
/// `r = solve_radius(n, m, δ)` and `3n ≤ m ≤ δ·3n²/2`.
pub fn fundamental_check(n: u64, m: u64, delta: u32) -> Result<FundamentalCheck> {
    if n == 0 || !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("need n >= 1 and delta in 1..=3, got n={n}, delta={delta}")));
    }
    let centre = delta as u64 * 3 * n * n / 2;
    if m < 3 * n || m > centre {
        return Err(domain!("m = {m} outside [3n, δ·3n²/2] = [{}, {centre}]", 3 * n));
    }
    let ctx = SaddleContext::new(n, m, delta)?;
    let poly = borwein_poly(n, delta, None)?;
    let coefficient = poly.coeff(m as usize).and_then(|c| c.to_f64()).unwrap_or(0.0);
    let lw = log_borwein(n, delta, third_root() * ctx.r);
    let scale = (m as f64 * ctx.r.ln() - lw.re).exp() * (2.0 * PI * ctx.g).sqrt()
        / erf(ctx.theta0 * (ctx.g / 2.0).sqrt());
    let main = 2.0 * (lw.im - 2.0 * PI * (m % 3) as f64 / 3.0).cos();
    let lhs = (coefficient * scale - main).abs();
    let eps0 = eps0_direct(&ctx);
    let eps1 = eps1_direct(&ctx);
    Ok(FundamentalCheck {
        n,
        m,
        delta,
        r: ctx.r,
        coefficient,
        lhs,
        main,
        eps0,
        eps1,
        holds: lhs <= eps0 + eps1 + FUNDAMENTAL_SLACK,
    })
}
