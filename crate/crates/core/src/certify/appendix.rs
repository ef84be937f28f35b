//! Randomised and grid property tests for the auxiliary inequalities used by
//! the peak and tail bounds. Each entry reports the worst observed value
//! against its limit; none of them is a proof.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::beta::{beta, scaled_inequality, scaled_mu};
use super::grid::{certified_sup, grid_max};
use super::region::sup_kernel_on_region;
use super::special::{gamma, lower_gamma};
use crate::qseries::Length;
use crate::saddle::{x_direct, x_sum, KernelKind, LogDerivKernels};

/// Outcome of one property.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub samples: usize,
    /// Largest observed left side, or largest observed `lhs − rhs` when `limit` is 0.
    pub worst: f64,
    pub limit: f64,
    pub passed: bool,
}

/// Pass/fail manifest of the whole suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteManifest {
    pub seed: u64,
    pub grid: usize,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<PropertyResult>,
}

impl SuiteManifest {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

const EQ_TOL: f64 = 1e-12;

fn strict(name: &str, samples: usize, worst: f64, limit: f64) -> PropertyResult {
    PropertyResult { name: name.into(), samples, worst, limit, passed: worst < limit }
}

fn weak(name: &str, samples: usize, worst: f64, limit: f64) -> PropertyResult {
    PropertyResult { name: name.into(), samples, worst, limit, passed: worst <= limit + EQ_TOL * limit.abs().max(1.0) }
}

/// Runs every property with the given seed and grid size.
pub fn run_appendix_suite(seed: u64, grid: usize) -> SuiteManifest {
    let grid = grid.max(100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    results.extend(rational_bounds(grid));
    results.extend(log_rational_bounds(grid));
    results.push(radius_function_bound(grid));
    results.extend(kernel_region_table(grid));
    results.push(gamma_sup_bound());
    results.extend(x_sum_bounds(&mut rng));
    results.extend(complex_exponential_bounds(&mut rng));
    results.push(cos_sum_abel(&mut rng));
    results.push(cos_sum_geometric(&mut rng));
    results.push(chebyshev_difference());
    results.push(monotone_quotient(&mut rng));
    results.push(cos_cos_floor(grid));
    results.extend(beta_rescaled(&mut rng));
    let failed = results.iter().filter(|r| !r.passed).count();
    SuiteManifest { seed, grid, passed: results.len() - failed, failed, results }
}

fn s_grid(grid: usize) -> impl ParallelIterator<Item = f64> {
    (1..grid).into_par_iter().map(move |k| k as f64 / grid as f64)
}

fn par_max<F: Fn(f64) -> f64 + Sync + Send>(grid: usize, f: F) -> f64 {
    s_grid(grid).map(f).reduce(|| f64::NEG_INFINITY, f64::max)
}

fn par_min<F: Fn(f64) -> f64 + Sync + Send>(grid: usize, f: F) -> f64 {
    s_grid(grid).map(f).reduce(|| f64::INFINITY, f64::min)
}

fn rational_bounds(grid: usize) -> Vec<PropertyResult> {
    let k = LogDerivKernels::get();
    let u1 = par_max(grid, |s| k.eval_real(KernelKind::U, 1, s) / s);
    let u2_hi = par_max(grid, |s| k.eval_real(KernelKind::U, 2, s) / s);
    let u2_lo = par_min(grid, |s| k.eval_real(KernelKind::U, 2, s) / s).min(k.eval_real(KernelKind::U, 2, 1.0));
    vec![
        weak("u1_over_s_le_2_over_sqrt3", grid, u1, 2.0 / 3f64.sqrt()),
        strict("u2_over_s_lt_6_over_5", grid, u2_hi, 1.2),
        weak("u2_over_s_ge_2_over_3", grid, -u2_lo, -2.0 / 3.0),
    ]
}

fn ungl2_lhs(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0 / 9.0;
    }
    s.powf(3.0 - 1.0 / 400.0) * (-s.ln()) / -(9.0 * s.ln()).exp_m1()
}

fn log_rational_bounds(grid: usize) -> Vec<PropertyResult> {
    let k = LogDerivKernels::get();
    let v = |j: usize, s: f64| k.eval_real(KernelKind::V, j, s);
    let mut out = Vec::new();

    let w = par_max(grid, |s| -(3.0 * s.ln()).exp_m1() / ((-s.ln()) * (1.0 + s)));
    out.push(weak("ungl2a_le_3_over_2", grid, w, 1.5));

    // |d/ds| of the left side is below 1.9 on [0, 1].
    let cert = certified_sup(ungl2_lhs, 1.9, 0.0, 1.0, grid).expect("valid grid");
    out.push(strict("ungl2_lt_0.134", grid, cert.certified_sup, 0.134));

    let w = par_max(grid, |s| {
        let l = s.ln();
        let a = (3.0 * l).exp_m1();
        a * a / (l * l * (1.0 + 2.0 * s + 2.0 * s.powi(3) + s.powi(4)))
    });
    out.push(weak("ungl3a_le_3_over_2", grid, w, 1.5));

    let w = par_max(grid, |s| {
        let l = s.ln();
        s.powf(3.0 - 1.0 / 400.0) * (6.0 * l).exp_m1() * l * l
            / ((9.0 * l).exp_m1() * -(1.5 * l).exp_m1() * (1.0 + s.powi(3) + s.powi(6)))
    });
    out.push(strict("ungl3_lt_0.084", grid, w, 0.084));

    let w = par_max(grid, |s| {
        let l = s.ln();
        (2.0 * l * v(2, s) + l * l * v(3, s)).abs()
    });
    out.push(strict("ungl4_lt_1_over_3", grid, w, 1.0 / 3.0));

    let w = par_max(grid, |s| (4.0 * v(4, s) + s.ln() * v(5, s)).abs());
    out.push(strict("ungl5_lt_9_over_8", grid, w, 9.0 / 8.0));

    let w = par_max(grid, |s| {
        let l = s.ln();
        (2.0 * v(2, s) + 2.0 * l * v(3, s) + l * l * v(4, s)).abs()
    });
    out.push(strict("ungl6_lt_0.21", grid, w, 0.21));

    let w = par_max(grid, |s| {
        let l = s.ln();
        (12.0 * v(4, s) + 8.0 * l * v(5, s) + l * l * v(6, s)).abs()
    });
    out.push(strict("ungl7_lt_3.7", grid, w, 3.7));
    out
}

/// `2r(1+2r+2r³+r⁴)(−log r)² / (√3 (1−r³)²)`.
pub fn radius_function(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r >= 1.0 {
        return 12.0 / (9.0 * 3f64.sqrt());
    }
    let l = r.ln();
    let d = (3.0 * l).exp_m1();
    2.0 * r * (1.0 + 2.0 * r + 2.0 * r.powi(3) + r.powi(4)) * l * l / (3f64.sqrt() * d * d)
}

fn radius_function_bound(grid: usize) -> PropertyResult {
    // On [0, 0.01] the factor r(log r)² is increasing, so the value at 0.01 bounds it.
    let head = 2.0 * 0.01 * 1.0201 * (0.01f64.ln()).powi(2) / (3f64.sqrt() * (1.0 - 1e-6f64).powi(2));
    // |f'| ≤ 532 on [0.01, 1].
    let cert = certified_sup(radius_function, 532.0, 0.01, 1.0, grid).expect("valid grid");
    strict("radius_function_lt_8_over_9", grid + 1, cert.certified_sup.max(head), 8.0 / 9.0)
}

fn kernel_region_table(grid: usize) -> Vec<PropertyResult> {
    let rows: [(&str, KernelKind, usize, f64, f64); 10] = [
        ("u3_on_s5", KernelKind::U, 3, 5.0 / 27.0, 1.3),
        ("u4_on_s5", KernelKind::U, 4, 5.0 / 27.0, 1.409),
        ("u3_on_s10", KernelKind::U, 3, 10.0 / 27.0, 1.44),
        ("u4_on_s10", KernelKind::U, 4, 10.0 / 27.0, 1.721),
        ("v3_on_s10", KernelKind::V, 3, 10.0 / 27.0, 1.01),
        ("v4_on_s10", KernelKind::V, 4, 10.0 / 27.0, 1.02),
        ("v5_on_s10", KernelKind::V, 5, 10.0 / 27.0, 2.09),
        ("v6_on_s10", KernelKind::V, 6, 10.0 / 27.0, 5.46),
        ("v7_on_s10", KernelKind::V, 7, 10.0 / 27.0, 19.1),
        ("v8_on_s10", KernelKind::V, 8, 10.0 / 27.0, 73.0),
    ];
    rows.iter()
        .map(|&(name, kind, j, rho, lim)| {
            let c = sup_kernel_on_region(j, kind, rho, grid).expect("valid region");
            strict(&format!("kernel_sup_{name}"), 2 * (grid + 1), c.certified_sup, lim)
        })
        .collect()
}

fn gamma_sup_bound() -> PropertyResult {
    let mut worst = f64::NEG_INFINITY;
    let mut samples = 0;
    for &(c, d, mu) in &[(1.0, 3.0, 0.5), (0.5, 2.5, 0.3), (2.0, 6.5, 0.9), (3.0, 4.0, 0.1)] {
        let bound = f64::powf(mu, c) * gamma(d - c + 1.0) / (c * (2.0 * PI * (d - c)).sqrt());
        let (m, _) = grid_max(|lw: f64| {
            let w = lw.exp();
            w.powf(-c) * lower_gamma(d, mu * w).unwrap_or(0.0)
        }, -8.0, 8.0, 20_000);
        worst = worst.max(m - bound);
        samples += 20_001;
    }
    weak("incomplete_gamma_sup", samples, worst, 0.0)
}

fn x_inf(j: usize, r: f64) -> f64 {
    x_sum(j, Length::Infinite, r).expect("r < 1")
}

fn x_sum_bounds(rng: &mut ChaCha8Rng) -> Vec<PropertyResult> {
    let trials = 2000;
    let draws: Vec<(u64, f64)> = (0..trials).map(|_| (rng.gen_range(1..=100u64), rng.gen_range(0.0..1.0f64).max(1e-3))).collect();
    let x = |j: usize, n: u64, r: f64| x_direct(j, n, r);
    let mut x1 = f64::NEG_INFINITY;
    let mut b1 = f64::NEG_INFINITY;
    let mut b2 = f64::NEG_INFINITY;
    let mut ratios = [f64::NEG_INFINITY; 8];
    for &(n, r) in &draws {
        let xs: Vec<f64> = (0..5).map(|j| x(j, n, r)).collect();
        let nf = n as f64;
        let lower = r * (1.0 + 2.0 * r + 2.0 * r.powi(3) + r.powi(4)) * (1.0 - r.powf(3.0 * nf)) * (1.0 - r.powf(1.5 * nf))
            / (1.0 - r.powi(3)).powi(2);
        x1 = x1.max((lower - xs[1]) / xs[1]);
        if r < 0.999 {
            for j in 0..4 {
                let lhs = xs[j + 1] / (xs[0] * xs[j]);
                let rhs = x_inf(j + 1, r) / (x_inf(0, r) * x_inf(j, r));
                b1 = b1.max((lhs - rhs) / rhs);
            }
            for j in 0..3 {
                let lhs = xs[j] * xs[j + 2] / (xs[j + 1] * xs[j + 1]);
                let rhs = x_inf(j, r) * x_inf(j + 2, r) / x_inf(j + 1, r).powi(2);
                b2 = b2.max((lhs - rhs) / rhs);
            }
        }
        let vals = [
            xs[0] * xs[0] / (r * xs[1]) / (4.0 / 3.0),
            r * xs[2] / (xs[0] * xs[1]) / 3.0,
            r * r * xs[2] / xs[0].powi(3) / 4.5,
            r * xs[3] / (xs[0] * xs[2]) / 4.5,
            r * r * xs[4] / (xs[0] * xs[0] * xs[2]) / 27.0,
            xs[0] * xs[3] / (xs[1] * xs[2]) / 3.0,
            xs[0] * xs[3] * xs[3] / xs[2].powi(3) / 4.5,
            xs[0] * xs[4] / (xs[2] * xs[2]) / 6.0,
        ];
        for (w, v) in ratios.iter_mut().zip(vals) {
            *w = w.max(v);
        }
    }
    let names = [
        "x_ratio_00_1_le_4_over_3",
        "x_ratio_2_01_le_3",
        "x_ratio_2_000_le_9_over_2",
        "x_ratio_3_02_le_9_over_2",
        "x_ratio_4_002_le_27",
        "x_ratio_03_12_le_3",
        "x_ratio_033_222_le_9_over_2",
        "x_ratio_04_22_le_6",
    ];
    let mut out = vec![
        weak("x1_lower_bound", trials, x1, 0.0),
        weak("x_ratio_vs_infinite_1", trials, b1, 0.0),
        weak("x_ratio_vs_infinite_2", trials, b2, 0.0),
    ];
    for (name, w) in names.iter().zip(ratios) {
        out.push(weak(name, trials, w, 1.0));
    }
    out
}

fn complex_exponential_bounds(rng: &mut ChaCha8Rng) -> Vec<PropertyResult> {
    let trials = 10_000;
    let mut odd = f64::NEG_INFINITY;
    let mut even = f64::NEG_INFINITY;
    for _ in 0..trials {
        let scale = 10f64.powf(rng.gen_range(-3.0..1.0));
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        let mx = z.norm().max(w.norm());
        let half = 2.0 * ((z + w).norm() / 2.0).sinh();
        let lhs = (z.exp() - w.exp()).norm();
        let rhs = 2.0 * mx.sinh() + half;
        odd = odd.max((lhs - rhs) / rhs.max(1e-300));
        let lhs = (z.exp() + w.exp() - 2.0).norm();
        let rhs = 2.0 * mx.cosh() - 2.0 + half;
        even = even.max((lhs - rhs) / rhs.max(1e-300));
    }
    vec![weak("complex_exp_difference", trials, odd, 0.0), weak("complex_exp_sum", trials, even, 0.0)]
}

fn cos_sum_abel(rng: &mut ChaCha8Rng) -> PropertyResult {
    let trials = 2000;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let r: f64 = rng.gen_range(0.01..1.0);
        let theta: f64 = rng.gen_range(0.05..(2.0 * PI - 0.05));
        let phi: f64 = rng.gen_range(0.0..(2.0 * PI));
        let a = rng.gen_range(0..=200usize);
        let b = rng.gen_range(a..=200usize);
        let mut u = Vec::with_capacity(b + 1);
        let mut acc = rng.gen_range(0.01..1.0);
        for _ in 0..=b {
            u.push(acc);
            acc += rng.gen_range(0.0..1.0);
        }
        let mut lhs = 0.0;
        let mut plain = 0.0;
        for (k, &uk) in u.iter().enumerate().take(b + 1).skip(a) {
            let rk = r.powi(k as i32);
            lhs += uk * rk * (k as f64 * theta + phi).cos();
            plain += uk * rk;
        }
        let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(r, theta);
        let rhs = ((1.0 - r) * plain + 2.0 * r.powi(b as i32 + 1) * u[b]) / denom.norm();
        worst = worst.max((lhs.abs() - rhs) / rhs.max(1e-300));
    }
    weak("cos_sum_abel", trials, worst, 0.0)
}

fn cos_sum_geometric(rng: &mut ChaCha8Rng) -> PropertyResult {
    let trials = 4000;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let r: f64 = rng.gen_range(0.0..1.0f64).clamp(1e-6, 1.0 - 1e-6);
        let n = rng.gen_range(1..=500u32);
        let theta: f64 = rng.gen_range(-PI + 1e-9..PI - 1e-9);
        let mut lhs = 0.0;
        for k in 1..=n {
            lhs += r.powi(k as i32 - 1) * (k as f64 * theta).cos();
        }
        let nf = n as f64;
        let geo = (1.0 - r.powf(nf)) / (1.0 - r);
        let kappa = (1.0 + r) * (1.0 - r.powf(nf)) * (1.0 - r.powf(nf / 6.0)) / ((1.0 - r) * (1.0 - r));
        let t = (theta / 2.0).tan();
        let rhs = geo / (1.0 + 4.0 * kappa * t * t).sqrt();
        worst = worst.max((lhs - rhs) / geo);
    }
    weak("cos_sum_geometric", trials, worst, 0.0)
}

fn chebyshev_difference() -> PropertyResult {
    let mut worst = f64::NEG_INFINITY;
    let mut samples = 0;
    for n in 1..=50u32 {
        let nf = n as f64;
        for k in 0..=2000 {
            let theta = -PI / nf + 2.0 * PI / nf * k as f64 / 2000.0;
            let lhs = (nf * theta).cos() - (nf * theta + theta).cos();
            let half = theta / 2.0;
            // 3 cot²(θ/2) written as 3 cos²/sin² so that θ = 0 gives +∞.
            let c2 = if half == 0.0 { f64::INFINITY } else { (half.cos() / half.sin()).powi(2) };
            let rhs = 6.0 * (2.0 * nf + 1.0) / (3.0 * c2 + 2.0 * nf * nf + 2.0 * nf + 3.0);
            worst = worst.max(lhs - rhs);
            samples += 1;
        }
    }
    weak("chebyshev_difference", samples, worst, 0.0)
}

fn monotone_quotient(rng: &mut ChaCha8Rng) -> PropertyResult {
    let trials = 300;
    let mut worst = f64::NEG_INFINITY;
    let steps = 2000;
    for _ in 0..trials {
        let lambda = 10f64.powf(rng.gen_range(-1.3..1.3));
        let n = (6.0 + 36.0 / lambda).ceil() + rng.gen_range(0..50) as f64;
        let lo = (-8.0 * lambda / 9.0).exp();
        let logf = |r: f64| crate::numeric::pow_ratio(r, n, 1.0).ln() - lambda * crate::numeric::pow_ratio(r, n / 6.0, 1.0);
        let mut prev = logf(lo + (1.0 - lo) * 0.5 / steps as f64);
        for k in 1..steps {
            let r = lo + (1.0 - lo) * (k as f64 + 0.5) / steps as f64;
            let cur = logf(r);
            worst = worst.max((cur - prev) / prev.abs().max(1.0));
            prev = cur;
        }
    }
    weak("monotone_quotient", trials * steps, worst, 0.0)
}

fn cos_cos_floor(grid: usize) -> PropertyResult {
    let mut worst = f64::NEG_INFINITY;
    for k in 0..=grid {
        let x = -PI / 6.0 * k as f64 / grid as f64;
        for m in 0..3 {
            let lhs = (x - 2.0 * m as f64 * PI / 3.0).cos().abs();
            let rhs = if m == 2 { (PI / 3.0 - x).cos().abs() } else { 0.5 };
            worst = worst.max(rhs - lhs);
        }
    }
    weak("cos_cos_floor", 3 * (grid + 1), worst, 0.0)
}

fn beta_rescaled(rng: &mut ChaCha8Rng) -> Vec<PropertyResult> {
    let mus = [0.3, 0.5, 2.0 / 3.0, 20.0 / 27.0];
    let trials = 200;
    (1..=4u32)
        .map(|i| {
            let certs: Vec<f64> = mus.iter().map(|&mu| beta(i, mu, 4000).expect("valid mu").value).collect();
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..trials {
                let idx = rng.gen_range(0..mus.len());
                let u = 10f64.powf(rng.gen_range(-1.0..2.0));
                let v = 10f64.powf(rng.gen_range(-1.0..2.0));
                // Choose x₀ so that the rescaled argument equals mus[idx].
                let unit = scaled_mu(i, u, v, 1.0);
                let x0 = mus[idx] / unit;
                let (lhs, rhs) = scaled_inequality(i, u, v, x0, certs[idx]).expect("valid index");
                worst = worst.max((lhs - rhs) / rhs.abs().max(1e-300));
            }
            weak(&format!("beta{i}_rescaled_integral"), trials, worst, 0.0)
        })
        .collect()
}
