//! The constants `β_1, …, β_4`: suprema over `w > 0` of erf-normalised
//! perturbation integrals of a Gaussian.
//!
//! With `A(w) = w^a / erf(μ√w)` and `I(w) = ∫_0^μ y^p e^{−w y²} F(w y^q) dy`,
//!
//! | i | a   | p | q | F          |
//! |---|-----|---|---|------------|
//! | 1 | 3/2 | 0 | 3 | `cosh − 1` |
//! | 2 | 3/2 | 1 | 3 | `sinh`     |
//! | 3 | 3/2 | 0 | 4 | `sinh`     |
//! | 4 | 2   | 1 | 4 | `sinh`     |
//!
//! `β_i(μ) = sup_{w>0} A(w) I(w)`. On `[0, w₀]` the supremum is certified by a
//! grid with per-cell derivative bounds; for `w > w₀` the power series of `F`
//! is integrated termwise into lower incomplete gamma functions.

use rayon::prelude::*;
use serde::Serialize;

use super::special::{erf, gamma, ln_gamma};
use crate::error::{domain, Error, Result};
use crate::numeric::GaussLegendre;

/// Grid/tail threshold `w₀`.
pub const BETA_W0: f64 = 80.0;
/// Default number of grid cells on `[0, w₀]`.
pub const DEFAULT_GRID: usize = 100_000;
/// Grid size of strict mode.
pub const STRICT_GRID: usize = 1_000_000;

const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, Copy)]
struct Shape {
    a: f64,
    p: i32,
    q: i32,
    cosh: bool,
}

fn shape(i: u32) -> Result<Shape> {
    Ok(match i {
        1 => Shape { a: 1.5, p: 0, q: 3, cosh: true },
        2 => Shape { a: 1.5, p: 1, q: 3, cosh: false },
        3 => Shape { a: 1.5, p: 0, q: 4, cosh: false },
        4 => Shape { a: 2.0, p: 1, q: 4, cosh: false },
        _ => return Err(Error::Contract(format!("beta index must be 1..=4, got {i}"))),
    })
}

impl Shape {
    /// `e^{−w y²} F(w y^q)` without overflow.
    fn weighted_kernel(&self, w: f64, y: f64) -> f64 {
        let g = w * y * y;
        let x = w * y.powi(self.q);
        if self.cosh {
            let s = (0.5 * x).sinh();
            2.0 * s * s * (-g).exp()
        } else {
            0.5 * ((x - g).exp() - (-x - g).exp())
        }
    }

    /// `F(x)`.
    fn kernel(&self, x: f64) -> f64 {
        if self.cosh {
            let s = (0.5 * x).sinh();
            2.0 * s * s
        } else {
            x.sinh()
        }
    }
}

/// Certified upper bound for one `β_i(μ)` together with its parts.
#[derive(Debug, Clone, Serialize)]
pub struct BetaCertificate {
    pub i: u32,
    pub mu: f64,
    pub grid: usize,
    pub w0: f64,
    /// Largest sampled value and its location.
    pub grid_max: f64,
    pub argmax_w: f64,
    /// Certified bound on `[0, w₀]`.
    pub grid_bound: f64,
    /// Bound for `w > w₀`.
    pub tail_bound: f64,
    /// `max(grid_bound, tail_bound)`.
    pub value: f64,
}

struct Evaluator {
    shape: Shape,
    mu: f64,
    rule: GaussLegendre,
}

impl Evaluator {
    fn integral(&self, w: f64) -> f64 {
        let s = self.shape;
        self.rule.integrate_composite(0.0, self.mu, 4, |y| y.powi(s.p) * s.weighted_kernel(w, y))
    }

    fn prefactor(&self, w: f64) -> f64 {
        w.powf(self.shape.a) / erf(self.mu * w.sqrt())
    }

    fn value(&self, w: f64) -> f64 {
        if w <= 0.0 {
            0.0
        } else {
            self.prefactor(w) * self.integral(w)
        }
    }
}

/// `A(w) I(w)` at a single `w`, the function whose supremum is `β_i(μ)`.
pub fn beta_integrand(i: u32, mu: f64, w: f64) -> Result<f64> {
    check_mu(mu)?;
    let ev = Evaluator { shape: shape(i)?, mu, rule: GaussLegendre::new(20) };
    Ok(ev.value(w))
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(domain!("beta needs mu in (0, 1), got {mu}"));
    }
    Ok(())
}

/// Certified upper bound for `β_i(μ)` on a grid of `m` cells over `[0, w₀]`.
///
/// On each cell `[w_i, w_{i+1}]` the product `A I` has Lipschitz constant at most
/// `|A'| · M_p + A(w_{i+1}) · M_{p+2}`, because for `y ≤ μ < 1` the integrand of
/// `I` is at most `y^p e^{−w c y²}` and its `w`-derivative at most
/// `y^{p+2} e^{−w c y²}`, with `c = 1 − μ^{q−2}`. Here `M_e` bounds
/// `∫_0^μ y^e e^{−w_i c y²} dy` by the smaller of `μ^{e+1}/(e+1)` and the full
/// Gaussian moment.
/// `A` is increasing and `|A'(w)| ≤ a w^{a−1}/erf + μ w^{a−1/2}/(√π erf²)`. The
/// first cell is bounded directly by `A(w_1) μ^{p+1}/(p+1) F(w_1 μ^q)`.
pub fn beta(i: u32, mu: f64, m: usize) -> Result<BetaCertificate> {
    check_mu(mu)?;
    let s = shape(i)?;
    if m < 2 {
        return Err(Error::Contract(format!("grid size must be at least 2, got {m}")));
    }
    let ev = Evaluator { shape: s, mu, rule: GaussLegendre::new(20) };
    let h = BETA_W0 / m as f64;
    let wk = |k: usize| if k == m { BETA_W0 } else { h * k as f64 };
    let values: Vec<f64> = (0..=m).into_par_iter().map(|k| ev.value(wk(k))).collect();

    let i_max = mu.powi(s.p + 1) / (s.p + 1) as f64;
    let decay = 1.0 - mu.powi(s.q - 2);
    // ∫_0^μ y^e e^{−w c y²} dy ≤ min(μ^{e+1}/(e+1), Γ((e+1)/2) / (2 (w c)^{(e+1)/2})).
    let moment = |e: i32, w: f64| {
        let h = (e + 1) as f64 / 2.0;
        (mu.powi(e + 1) / (e + 1) as f64).min(gamma(h) / (2.0 * (w * decay).powf(h)))
    };
    let first = ev.prefactor(wk(1)) * i_max * s.kernel(wk(1) * mu.powi(s.q));
    let cells = (1..m)
        .into_par_iter()
        .map(|k| {
            let (lo, hi) = (wk(k), wk(k + 1));
            let e = erf(mu * lo.sqrt());
            let da = s.a * hi.powf(s.a - 1.0) / e + mu * hi.powf(s.a - 0.5) / (SQRT_PI * e * e);
            let d = da * moment(s.p, lo) + ev.prefactor(hi) * moment(s.p + 2, lo);
            values[k].max(values[k + 1]) + 0.5 * (hi - lo) * d
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let grid_bound = first.max(cells);

    let (argmax, gmax) =
        values.iter().enumerate().fold((0usize, f64::NEG_INFINITY), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
    let tail = tail_bound(s, mu, BETA_W0);
    Ok(BetaCertificate {
        i,
        mu,
        grid: m,
        w0: BETA_W0,
        grid_max: gmax,
        argmax_w: wk(argmax),
        grid_bound,
        tail_bound: tail,
        value: grid_bound.max(tail),
    })
}

/// Bound for `sup_{w ≥ w₀} A(w) I(w)`.
///
/// Expanding `F(x) = Σ_t x^t/t!` gives the terms `w^{−c} γ(d, μ² w) / (2 t!)` with
/// `d = (p + q t + 1)/2` and `c = d − a − t ≥ 0`. Each is bounded by the smaller
/// of `Γ(d)/(2 t! w₀^c)` and `μ^{2c} Γ(d−c+1)/(2 t! c √(2π(d−c)))`; the series
/// is summed until the terms decay geometrically below `10⁻¹⁸` and the rest is
/// bounded by the geometric remainder. Finally `1/erf(μ√w) ≤ 1/erf(μ√w₀)`.
fn tail_bound(s: Shape, mu: f64, w0: f64) -> f64 {
    let ln_mu = mu.ln();
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut rest = 0.0;
    for k in 0..5000u32 {
        let t = if s.cosh { 2 * k + 2 } else { 2 * k + 1 } as f64;
        let d = (s.p as f64 + s.q as f64 * t + 1.0) / 2.0;
        let c = d - s.a - t;
        let lf = ln_gamma(t + 1.0);
        let trivial = (ln_gamma(d) - lf - c * w0.ln()).exp() / 2.0;
        let term = if c > 0.0 {
            let sharp = (2.0 * c * ln_mu + ln_gamma(d - c + 1.0) - lf).exp() / (2.0 * c * (2.0 * std::f64::consts::PI * (d - c)).sqrt());
            trivial.min(sharp)
        } else {
            trivial
        };
        sum += term;
        let ratio = term / prev;
        prev = term;
        if k >= 4 && term < 1e-18 && ratio < 0.9 {
            rest = term * ratio / (1.0 - ratio);
            break;
        }
    }
    (sum + rest) / erf(mu * w0.sqrt())
}

/// The integral `∫_0^{x₀} y^p e^{−u y²} F(v y^q) dy` bounded by the β-scaled right side.
///
/// Returns `(left, right)` for the rescaled inequality: for `i = 1, 2` the
/// substitution is `μ = x₀ v/u`, `w = u³/v²`; for `i = 3, 4` it is
/// `μ = x₀ √(v/u)`, `w = u²/v`.
pub fn scaled_inequality(i: u32, u: f64, v: f64, x0: f64, beta_value: f64) -> Result<(f64, f64)> {
    let s = shape(i)?;
    let rule = GaussLegendre::new(40);
    let left: f64 =
        rule.integrate_composite(0.0, x0, 8, |y| y.powi(s.p) * (-u * y * y).exp() * s.kernel(v * y.powi(s.q)));
    let e = erf(x0 * u.sqrt());
    let right = match i {
        1 => beta_value * v * v / u.powf(3.5) * e,
        2 => beta_value * v / u.powf(2.5) * e,
        3 => beta_value * v / u.powf(2.5) * e,
        _ => beta_value * v / u.powi(3) * e,
    };
    Ok((left, right))
}

/// The `μ` argument of `β_i` after the substitution in [`scaled_inequality`].
pub fn scaled_mu(i: u32, u: f64, v: f64, x0: f64) -> f64 {
    if i <= 2 {
        x0 * v / u
    } else {
        x0 * (v / u).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(beta(1, 1.0, 100), Err(Error::Domain(_))));
        assert!(matches!(beta(1, 0.0, 100), Err(Error::Domain(_))));
        assert!(matches!(beta(5, 0.5, 100), Err(Error::Contract(_))));
        assert!(matches!(beta(1, 0.5, 1), Err(Error::Contract(_))));
    }

    #[test]
    fn integrand_matches_independent_quadrature() {
        // Trapezoid rule on a fine grid as an independent check of the Gauss rule.
        for (i, mu, w) in [(1u32, 0.7, 19.0), (2, 0.7, 5.0), (3, 0.6, 40.0), (4, 0.6, 2.0)] {
            let s = shape(i).unwrap();
            let n = 200_000;
            let h = mu / n as f64;
            let f = |y: f64| y.powi(s.p) * s.weighted_kernel(w, y);
            let mut acc = 0.5 * (f(0.0) + f(mu));
            for k in 1..n {
                acc += f(h * k as f64);
            }
            let trap = acc * h * w.powf(s.a) / erf(mu * w.sqrt());
            let gl = beta_integrand(i, mu, w).unwrap();
            assert!((trap - gl).abs() < 1e-8 * gl.abs().max(1e-3), "i={i}: {trap} vs {gl}");
        }
    }

    #[test]
    fn small_w_behaviour() {
        // A(w) I(w) → 0 as w → 0.
        let v = beta_integrand(2, 0.7, 1e-6).unwrap();
        assert!(v.abs() < 1e-6);
    }

    #[test]
    fn coarse_certificate_is_above_samples() {
        let c = beta(1, 20.0 / 27.0, 2000).unwrap();
        assert!(c.value >= c.grid_max);
        assert!(c.grid_max > 1.37 && c.grid_max < 1.39);
    }
}
