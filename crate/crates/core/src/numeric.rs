//! Small numerical kernels shared by the analytic modules: quadrature rules,
//! bisection and a few numerically stable elementary expressions.

use std::f64::consts::PI;

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `order`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]` with a single application of the rule.
    pub fn integrate<T, F>(&self, a: f64, b: f64, f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }

    /// Composite rule with `panels` equal sub-intervals.
    pub fn integrate_composite<T, F>(&self, a: f64, b: f64, panels: usize, f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(f64) -> T,
    {
        let h = (b - a) / panels as f64;
        let mut acc = T::default();
        for p in 0..panels {
            let lo = a + h * p as f64;
            acc = acc + self.integrate(lo, lo + h, &f);
        }
        acc
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Bisection for the boundary of a predicate that is false at `lo` and true at `hi`.
/// Returns the final `(lo, hi)` bracket once `hi - lo <= tol`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(mut lo: f64, mut hi: f64, tol: f64, mut holds: P) -> (f64, f64) {
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// `(1 - r^a) / (1 - r^b)` evaluated without cancellation; the value at `r = 1` is `a / b`.
pub fn pow_ratio(r: f64, a: f64, b: f64) -> f64 {
    if r == 1.0 {
        return a / b;
    }
    let l = r.ln();
    (a * l).exp_m1() / (b * l).exp_m1()
}

/// `r^k` through the logarithm, accurate for large `k`.
#[inline]
pub fn powk(r: f64, k: f64) -> f64 {
    if r == 1.0 {
        1.0
    } else {
        (k * r.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_matches_closed_forms() {
        let v = adaptive_simpson(|x| x.exp(), 0.0, 1.0, 1e-12);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
        let v = adaptive_simpson(|x| 1.0 / (1.0 + x * x), 0.0, 4.0, 1e-12);
        assert!((v - 4f64.atan()).abs() < 1e-11);
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let g = GaussLegendre::new(10);
        let w: f64 = g.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // Degree 19 is integrated exactly by 10 nodes.
        let v: f64 = g.integrate(0.0, 2.0, |x| x.powi(19));
        assert!((v - 2f64.powi(20) / 20.0).abs() < 1e-8);
        let v: f64 = GaussLegendre::new(64).integrate_composite(0.0, PI, 4, |x| x.sin());
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pow_ratio_limits() {
        assert_eq!(pow_ratio(1.0, 3.0, 30.0), 0.1);
        let r: f64 = 1.0 - 1e-12;
        assert!((pow_ratio(r, 3.0, 30.0) - 0.1).abs() < 1e-10);
        let r: f64 = 0.5;
        assert!((pow_ratio(r, 1.0, 2.0) - 0.5 / 0.75).abs() < 1e-15);
    }

    #[test]
    fn bisection_brackets_sqrt2() {
        let (lo, hi) = bisect_predicate(0.0, 2.0, 1e-12, |x| x * x >= 2.0);
        assert!(lo < 2f64.sqrt() && 2f64.sqrt() <= hi && hi - lo <= 1e-12);
    }
}
