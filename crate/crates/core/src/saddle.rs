//! Log-derivative kernels of the Borwein product, the power sums `X_j`, and
//! the radius of the frozen-argument saddle-point equation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::qseries::Length;

/// Highest kernel order provided by [`LogDerivKernels`].
pub const MAX_KERNEL_ORDER: usize = 8;

/// Which kernel family: `u_1 = z(1+2z)/(1+z+z²)` or `v_1 = z/(1+z+z²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    U,
    V,
}

/// The rational functions `u_j = (z d/dz)^{j−1} u_1` and `v_j = (z d/dz)^{j−1} v_1`.
///
/// Each is stored as an integer numerator polynomial `N_j` over `(1+z+z²)^j`.
/// Applying `z d/dz` to `N_j / D^j` gives `z (N_j' D − j N_j D') / D^{j+1}`.
#[derive(Debug, Clone)]
pub struct LogDerivKernels {
    u_num: Vec<Vec<i64>>,
    v_num: Vec<Vec<i64>>,
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_deriv(a: &[i64]) -> Vec<i64> {
    if a.len() <= 1 {
        return vec![0];
    }
    a.iter().enumerate().skip(1).map(|(i, c)| i as i64 * c).collect()
}

fn next_numerator(n: &[i64], j: i64) -> Vec<i64> {
    let d = [1i64, 1, 1];
    let dd = [1i64, 2];
    let left = poly_mul(&poly_deriv(n), &d);
    let right = poly_mul(n, &dd);
    let len = left.len().max(right.len());
    let mut diff = vec![0i64; len + 1];
    for i in 0..len {
        let l = left.get(i).copied().unwrap_or(0);
        let r = right.get(i).copied().unwrap_or(0);
        diff[i + 1] = l - j * r;
    }
    while diff.len() > 1 && *diff.last().unwrap_or(&1) == 0 {
        diff.pop();
    }
    diff
}

impl Default for LogDerivKernels {
    fn default() -> Self {
        Self::new()
    }
}

impl LogDerivKernels {
    pub fn new() -> Self {
        let mut u_num = vec![vec![0, 1, 2]];
        let mut v_num = vec![vec![0, 1]];
        for j in 1..MAX_KERNEL_ORDER {
            let nu = next_numerator(&u_num[j - 1], j as i64);
            let nv = next_numerator(&v_num[j - 1], j as i64);
            u_num.push(nu);
            v_num.push(nv);
        }
        Self { u_num, v_num }
    }

    /// Shared instance.
    pub fn get() -> &'static Self {
        static K: OnceLock<LogDerivKernels> = OnceLock::new();
        K.get_or_init(Self::new)
    }

    /// Numerator coefficients (ascending powers of `z`) of the order-`j` kernel.
    pub fn numerator(&self, kind: KernelKind, j: usize) -> &[i64] {
        assert!((1..=MAX_KERNEL_ORDER).contains(&j), "kernel order {j} out of range");
        match kind {
            KernelKind::U => &self.u_num[j - 1],
            KernelKind::V => &self.v_num[j - 1],
        }
    }

    pub fn eval(&self, kind: KernelKind, j: usize, z: Complex64) -> Complex64 {
        let num = self.numerator(kind, j);
        let mut p = Complex64::new(0.0, 0.0);
        for c in num.iter().rev() {
            p = p * z + *c as f64;
        }
        let d = Complex64::new(1.0, 0.0) + z + z * z;
        p / d.powi(j as i32)
    }

    pub fn eval_real(&self, kind: KernelKind, j: usize, x: f64) -> f64 {
        let num = self.numerator(kind, j);
        let mut p = 0.0;
        for c in num.iter().rev() {
            p = p * x + *c as f64;
        }
        p / (1.0 + x + x * x).powi(j as i32)
    }

    pub fn u(&self, j: usize, z: Complex64) -> Complex64 {
        self.eval(KernelKind::U, j, z)
    }

    pub fn v(&self, j: usize, z: Complex64) -> Complex64 {
        self.eval(KernelKind::V, j, z)
    }
}

/// `u_1(x) = x(1+2x)/(1+x+x²)` for real `x ≥ 0`, stable for large `x`.
#[inline]
pub fn u1(x: f64) -> f64 {
    if x <= 1.0 {
        x * (1.0 + 2.0 * x) / (1.0 + x + x * x)
    } else {
        let y = 1.0 / x;
        (2.0 + y) / (1.0 + y + y * y)
    }
}

/// Derivative `u_1'(x) = (1+4x+x²)/(1+x+x²)²`.
#[inline]
pub fn u1_prime(x: f64) -> f64 {
    let d = 1.0 + x + x * x;
    (1.0 + 4.0 * x + x * x) / (d * d)
}

fn binom(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Eulerian polynomial coefficients `A_i(x)` for `i = 0..=8`, with
/// `Σ_{k≥1} k^i x^k = x A_i(x) / (1−x)^{i+1}`.
fn eulerian() -> &'static [Vec<f64>] {
    static E: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    E.get_or_init(|| {
        let mut rows: Vec<Vec<f64>> = vec![vec![1.0], vec![1.0]];
        for n in 2..=MAX_KERNEL_ORDER {
            let prev = &rows[n - 1];
            let mut row = vec![0.0; n];
            for (k, slot) in row.iter_mut().enumerate() {
                let a = if k < prev.len() { (k + 1) as f64 * prev[k] } else { 0.0 };
                let b = if k >= 1 && k - 1 < prev.len() { (n - k) as f64 * prev[k - 1] } else { 0.0 };
                *slot = a + b;
            }
            rows.push(row);
        }
        rows
    })
}

/// `Σ_{k≥1} k^i x^k` for `0 ≤ x < 1`.
fn polylog_neg(i: usize, x: f64) -> f64 {
    let a = &eulerian()[i];
    let mut p = 0.0;
    for c in a.iter().rev() {
        p = p * x + c;
    }
    x * p / (1.0 - x).powi(i as i32 + 1)
}

/// `Σ_{k=1}^{N} k^j x^k` in closed form.
fn partial_power_sum(j: usize, big_n: f64, x: f64) -> f64 {
    let xn = (big_n * x.ln()).exp();
    let mut tail = 0.0;
    for i in 0..=j {
        tail += binom(j, i) * big_n.powi((j - i) as i32) * polylog_neg(i, x);
    }
    polylog_neg(j, x) - xn * tail
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain!("radius {r} outside (0, 1]"));
    }
    Ok(())
}

/// `X_j(n, r) = Σ_{k ≤ 3n, 3∤k} k^j r^k` by direct summation.
pub fn x_direct(j: usize, n: u64, r: f64) -> f64 {
    let lr = r.ln();
    let mut s = 0.0;
    for k in 1..=3 * n {
        if k % 3 != 0 {
            let kf = k as f64;
            s += kf.powi(j as i32) * (kf * lr).exp();
        }
    }
    s
}

/// `X_j(n, r) = Σ_{k ≤ 3n, 3∤k} k^j r^k` for `j ≤ 8`.
///
/// Uses the closed form `S_j(3n, r) − 3^j S_j(n, r³)` with
/// `S_j(N, x) = Σ_{k≤N} k^j x^k` when `1 − r³ ≥ 10⁻⁴` and `n(1 − r³) ≥ 8`, and
/// direct summation otherwise. The infinite sum requires `r < 1`.
pub fn x_sum(j: usize, n: Length, r: f64) -> Result<f64> {
    if j > MAX_KERNEL_ORDER {
        return Err(Error::Contract(format!("X_j supports j <= {MAX_KERNEL_ORDER}, got {j}")));
    }
    check_radius(r)?;
    let r3 = r * r * r;
    let p3 = 3f64.powi(j as i32);
    match n {
        Length::Infinite => {
            if r >= 1.0 {
                return Err(domain!("X_j(inf, r) diverges at r = 1"));
            }
            Ok(polylog_neg(j, r) - p3 * polylog_neg(j, r3))
        }
        Length::Finite(n) => {
            let gap = -(3.0 * r.ln()).exp_m1();
            if r < 1.0 && gap >= 1e-4 && n as f64 * gap >= 8.0 {
                let nf = n as f64;
                Ok(partial_power_sum(j, 3.0 * nf, r) - p3 * partial_power_sum(j, nf, r3))
            } else {
                Ok(x_direct(j, n, r))
            }
        }
    }
}

/// `X_0, …, X_4` at `(n, r)`.
pub fn x_vector(n: u64, r: f64) -> Result<[f64; 5]> {
    let mut out = [0.0; 5];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = x_sum(j, Length::Finite(n), r)?;
    }
    Ok(out)
}

fn uv_sum(kind: KernelKind, j: usize, n: u64, z: Complex64) -> Complex64 {
    let ker = LogDerivKernels::get();
    let z3 = z * z * z;
    let mut zk1 = z; // z^{3k-2}
    let mut zk2 = z * z; // z^{3k-1}
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        let a = (3 * k - 2) as f64;
        let b = (3 * k - 1) as f64;
        let ta = ker.eval(kind, j, zk1) * a.powi(j as i32);
        let tb = ker.eval(kind, j, zk2) * b.powi(j as i32);
        acc += match kind {
            KernelKind::U => ta + tb,
            KernelKind::V => ta - tb,
        };
        zk1 *= z3;
        zk2 *= z3;
    }
    acc
}

/// `U_j(n, z) = Σ_{k=1}^{n} ((3k−2)^j u_j(z^{3k−2}) + (3k−1)^j u_j(z^{3k−1}))`.
pub fn u_sum(j: usize, n: u64, z: Complex64) -> Complex64 {
    uv_sum(KernelKind::U, j, n, z)
}

/// `V_j(n, z) = Σ_{k=1}^{n} ((3k−2)^j v_j(z^{3k−2}) − (3k−1)^j v_j(z^{3k−1}))`.
pub fn v_sum(j: usize, n: u64, z: Complex64) -> Complex64 {
    uv_sum(KernelKind::V, j, n, z)
}

/// `Σ_{k ≤ 3n, 3∤k} k u_1(r^k)` and its derivative in `r`; valid for any `r > 0`.
pub fn stationary_lhs(n: u64, r: f64) -> (f64, f64) {
    let lr = r.ln();
    let mut f = 0.0;
    let mut df = 0.0;
    for k in 1..=3 * n {
        if k % 3 == 0 {
            continue;
        }
        let kf = k as f64;
        let x = (kf * lr).exp();
        f += kf * u1(x);
        if x.is_finite() {
            df += kf * kf * u1_prime(x) * x / r;
        }
    }
    (f, df)
}

/// Solves `Σ_{k ≤ 3n, 3∤k} k u_1(r^k) = 2m/δ` for `r > 0`.
///
/// The left side increases from 0 to `2·3n²`, passing `3n²` at `r = 1`, so the
/// root is unique. Safeguarded Newton iteration inside a bisection bracket,
/// stopping once the residual is below `max(10⁻¹² · 2m/δ, 10⁻⁹)` or the bracket
/// collapses to machine precision.
pub fn solve_radius(n: u64, m: u64, delta: u32) -> Result<f64> {
    if n == 0 || !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("need n >= 1 and delta in 1..=3, got n={n}, delta={delta}")));
    }
    let deg = 3 * n * n;
    let top = delta as u64 * deg;
    if m == 0 || m >= top {
        return Err(domain!("m = {m} outside (0, {top})"));
    }
    let target = 2.0 * m as f64 / delta as f64;
    if 2 * m == delta as u64 * deg {
        return Ok(1.0);
    }
    let tol = (1e-12 * target).max(1e-9);
    let (mut lo, mut hi) = if target < deg as f64 {
        (0.0, 1.0)
    } else {
        let mut hi = 2.0;
        while stationary_lhs(n, hi).0 < target {
            hi *= 2.0;
        }
        (1.0, hi)
    };
    let mut r = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (f, df) = stationary_lhs(n, r);
        let res = f - target;
        if res.abs() <= tol {
            return Ok(r);
        }
        if res < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Ok(r);
        }
        let newton = r - res / df;
        r = if df > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Ok(r)
}

/// `θ₀ = (10/81)(1 − r³)/(1 − r^{3n})`; the value at `r = 1` is `10/(81n)`.
pub fn cutoff_theta0(n: u64, r: f64) -> f64 {
    CUTOFF_C0 * crate::numeric::pow_ratio(r, 3.0, 3.0 * n as f64)
}

/// Constant `C₀ = 10/81` of the cutoff.
pub const CUTOFF_C0: f64 = 10.0 / 81.0;

/// `r₀ = exp(−√(4δ/(27n)))`.
pub fn r_floor(n: u64, delta: u32) -> f64 {
    (-(4.0 * delta as f64 / (27.0 * n as f64)).sqrt()).exp()
}

/// `log P_n^δ(z) = δ Σ_{k ≤ 3n, 3∤k} log(1 − z^k)`, on the principal branch of each factor.
pub fn log_borwein(n: u64, delta: u32, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..=3 * n {
        zk *= z;
        if k % 3 != 0 {
            acc += (Complex64::new(1.0, 0.0) - zk).ln();
        }
    }
    acc * delta as f64
}

/// `log |P_n^δ(r e^{iθ})|`, evaluated with exact powers.
pub fn log_abs_borwein(n: u64, delta: u32, r: f64, theta: f64) -> f64 {
    let lr = r.ln();
    let mut acc = 0.0;
    for k in 1..=3 * n {
        if k % 3 != 0 {
            let kf = k as f64;
            let w = Complex64::from_polar((kf * lr).exp(), kf * theta);
            acc += (Complex64::new(1.0, 0.0) - w).norm().ln();
        }
    }
    acc * delta as f64
}

/// Frozen-argument saddle data for `[q^m] P_n^δ`.
#[derive(Debug, Clone, Serialize)]
pub struct SaddleContext {
    pub n: u64,
    pub m: u64,
    pub delta: u32,
    pub r: f64,
    pub r0: f64,
    pub theta0: f64,
    /// `g = −Re ∂²_θ log P_n^δ(r e^{iθ})` at `θ = 2π/3`, equal to `(δ/2) U_2(n, r)`.
    pub g: f64,
    /// `X_0(n, r), …, X_4(n, r)`.
    pub x: [f64; 5],
}

impl SaddleContext {
    pub fn new(n: u64, m: u64, delta: u32) -> Result<Self> {
        let r = solve_radius(n, m, delta)?;
        Self::at_radius(n, m, delta, r)
    }

    /// Context at a prescribed radius `0 < r ≤ 1`.
    pub fn at_radius(n: u64, m: u64, delta: u32, r: f64) -> Result<Self> {
        check_radius(r)?;
        let g = 0.5 * delta as f64 * u_sum(2, n, Complex64::new(r, 0.0)).re;
        Ok(Self {
            n,
            m,
            delta,
            r,
            r0: r_floor(n, delta),
            theta0: cutoff_theta0(n, r),
            g,
            x: x_vector(n, r)?,
        })
    }
}

/// `e^{2πi/3}`.
pub fn third_root() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_match_printed_closed_forms() {
        let k = LogDerivKernels::new();
        // Numerators expanded by hand from the printed factorized forms.
        assert_eq!(k.numerator(KernelKind::U, 1), [0, 1, 2]);
        assert_eq!(k.numerator(KernelKind::V, 1), [0, 1]);
        assert_eq!(k.numerator(KernelKind::U, 2), [0, 1, 4, 1]);
        assert_eq!(k.numerator(KernelKind::V, 2), [0, 1, 0, -1]);
        // z(1 − z²)(1 + 7z + z²) = z + 7z² − 7z⁴ − z⁵
        assert_eq!(k.numerator(KernelKind::U, 3), [0, 1, 7, 0, -7, -1]);
        assert_eq!(k.numerator(KernelKind::V, 3), [0, 1, -1, -6, -1, 1]);
        assert_eq!(k.numerator(KernelKind::U, 4), [0, 1, 12, -12, -56, -12, 12, 1]);
        // z(1 − z²)(1 − 4z − 21z² − 4z³ + z⁴)
        assert_eq!(k.numerator(KernelKind::V, 4), [0, 1, -4, -22, 0, 22, 4, -1]);
    }

    #[test]
    fn x_closed_form_matches_direct() {
        for &n in &[10u64, 57, 200] {
            for &r in &[0.5, 0.9, 0.99, 0.999] {
                for j in 0..=8 {
                    let a = x_sum(j, Length::Finite(n), r).unwrap();
                    let b = x_direct(j, n, r);
                    assert!(((a - b) / b).abs() < 1e-12, "j={j} n={n} r={r}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn x_special_values() {
        assert_eq!(x_sum(0, Length::Finite(7), 1.0).unwrap(), 14.0);
        assert_eq!(x_sum(1, Length::Finite(7), 1.0).unwrap(), 147.0);
        assert!(x_sum(0, Length::Finite(7), 1.5).is_err());
        assert!(x_sum(0, Length::Infinite, 1.0).is_err());
        let inf = x_sum(2, Length::Infinite, 0.8).unwrap();
        assert!((inf - x_direct(2, 400, 0.8)).abs() < 1e-9 * inf);
    }

    #[test]
    fn radius_at_centre_and_monotone() {
        assert_eq!(solve_radius(10, 150, 1).unwrap(), 1.0);
        let a = solve_radius(100, 300, 1).unwrap();
        let b = solve_radius(100, 600, 1).unwrap();
        let c = solve_radius(100, 15000, 1).unwrap();
        assert!(a < b && b < c && c == 1.0);
        let hi = solve_radius(10, 250, 1).unwrap();
        assert!(hi > 1.0);
        let (f, _) = stationary_lhs(10, hi);
        assert!((f - 500.0).abs() < 1e-9);
        assert!(solve_radius(10, 300, 1).is_err());
        assert!(solve_radius(10, 0, 1).is_err());
    }

    #[test]
    fn cutoff_limits() {
        assert!((cutoff_theta0(50, 1.0) - 10.0 / (81.0 * 50.0)).abs() < 1e-16);
        assert!((cutoff_theta0(50, 1.0 - 1e-13) - 10.0 / (81.0 * 50.0)).abs() < 1e-12);
        assert_eq!(r_floor(400, 3), (-(12.0f64 / 10800.0).sqrt()).exp());
    }
}
