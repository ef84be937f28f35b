use std::f64::consts::PI;

use num_complex::Complex64;

use borwein::saddle::{
    log_abs_borwein, log_borwein, solve_radius, stationary_lhs, third_root, u1, LogDerivKernels, SaddleContext,
};

/// Plain bisection on the defining sum, written without the library's Newton step.
fn radius_by_bisection(n: u64, m: u64, delta: u32) -> f64 {
    let target = 2.0 * m as f64 / delta as f64;
    let lhs = |r: f64| -> f64 {
        (1..=3 * n).filter(|k| k % 3 != 0).map(|k| k as f64 * u1(r.powi(k as i32))).sum()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn radius_agrees_with_bisection() {
    for &(n, m, d) in &[(10u64, 30u64, 1u32), (20, 300, 2), (40, 2000, 3), (80, 1000, 1)] {
        let a = solve_radius(n, m, d).unwrap();
        let b = radius_by_bisection(n, m, d);
        assert!((a - b).abs() < 1e-10, "n={n} m={m}: {a} vs {b}");
    }
}

#[test]
fn radius_solves_the_frozen_argument_equation() {
    // d/d(log r) log|P_n^δ(r e^{2πi/3})| = m at the solution, by central differences.
    for &(n, m, d) in &[(15u64, 100u64, 1u32), (30, 900, 2), (25, 1500, 3)] {
        let r = solve_radius(n, m, d).unwrap();
        let h = 1e-5;
        let f = |lr: f64| log_abs_borwein(n, d, lr.exp(), 2.0 * PI / 3.0);
        let deriv = (f(r.ln() + h) - f(r.ln() - h)) / (2.0 * h);
        assert!((deriv - m as f64).abs() < 1e-4 * m as f64, "n={n} m={m}: {deriv}");
    }
}

#[test]
fn curvature_matches_second_difference() {
    for &(n, m, d) in &[(10u64, 40u64, 1u32), (30, 500, 2), (50, 3000, 3)] {
        let ctx = SaddleContext::new(n, m, d).unwrap();
        let h = 1e-4;
        let f = |t: f64| log_abs_borwein(n, d, ctx.r, 2.0 * PI / 3.0 + t);
        let second = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert!((ctx.g + second).abs() < 1e-4 * ctx.g, "n={n}: g={} fd={}", ctx.g, -second);
        // Two-sided bracket on g in terms of X₂.
        let x2 = ctx.x[2];
        assert!(ctx.g >= d as f64 * x2 / 3.0 && ctx.g < 0.6 * d as f64 * x2, "n={n}");
    }
}

#[test]
fn first_kernel_is_a_logarithmic_derivative() {
    // z d/dz log((1 − z³)/(1 − z)) = z/(1 − z) − 3z³/(1 − z³), by central differences
    // of the library's log-product and by the closed form.
    let ker = LogDerivKernels::get();
    for &z in &[Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5), Complex64::new(0.6, -0.3)] {
        let closed = z / (1.0 - z) - 3.0 * z.powi(3) / (1.0 - z.powi(3));
        assert!((ker.u(1, z) - closed).norm() < 1e-12);
        let h = 1e-6;
        let d = (log_borwein(1, 1, z * (1.0 + h)) - log_borwein(1, 1, z * (1.0 - h))) / (2.0 * h);
        let direct = -z / (1.0 - z) - 2.0 * z * z / (1.0 - z * z);
        assert!((d - direct).norm() < 1e-8);
    }
}

#[test]
fn stationary_sum_limits() {
    let n = 12;
    let (at_one, _) = stationary_lhs(n, 1.0);
    assert!((at_one - 3.0 * (n * n) as f64).abs() < 1e-9);
    let big = stationary_lhs(n, 1e6).0;
    assert!((big - 6.0 * (n * n) as f64).abs() < 1e-3);
    assert!((third_root().norm() - 1.0).abs() < 1e-15);
}
