//! The region `S_ρ = {R e^{iΘ} : 0 ≤ R ≤ 1, |Θ| ≤ ρ(−log R)/(1 − R)}` and
//! suprema of `|u_j(z)/z|`, `|v_j(z)/z|` over it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::saddle::{KernelKind, LogDerivKernels, MAX_KERNEL_ORDER};

/// `S_ρ` for a fixed `ρ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionS {
    pub rho: f64,
}

impl RegionS {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 2.0 * PI / 3.0) {
            return Err(Error::InvalidParams(format!("rho must lie in (0, 2π/3), got {rho}")));
        }
        Ok(Self { rho })
    }

    /// Angular half-width `ρ t / (1 − e^{−t})` at modulus `R = e^{−t}`.
    pub fn half_width(&self, t: f64) -> f64 {
        if t == 0.0 {
            self.rho
        } else {
            self.rho * t / -(-t).exp_m1()
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r > 1.0 {
            return false;
        }
        if r == 0.0 {
            return true;
        }
        z.arg().abs() <= self.half_width(-r.ln())
    }

    /// Depth `t* = −log R*` beyond which the whole circle `|z| = e^{−t}` lies in `S_ρ`.
    pub fn full_circle_depth(&self) -> f64 {
        // half_width is increasing in t; solve half_width(t) = π by bisection.
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.half_width(hi) < PI {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.half_width(mid) < PI {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Upper boundary point at depth `t ∈ [0, t*]`: `e^{−t + i ρ t/(1−e^{−t})}`.
    pub fn boundary_curve(&self, t: f64) -> Complex64 {
        Complex64::from_polar((-t).exp(), self.half_width(t))
    }
}

/// Result of [`sup_kernel_on_region`].
#[derive(Debug, Clone, Serialize)]
pub struct RegionCertificate {
    pub j: usize,
    pub kind: &'static str,
    pub rho: f64,
    pub grid: usize,
    pub grid_max: f64,
    /// Sampled bound on the derivative of `|h|` along the boundary, doubled.
    pub derivative_bound: f64,
    pub certified_sup: f64,
}

fn eval_over_z(ker: &LogDerivKernels, kind: KernelKind, j: usize, z: Complex64) -> (f64, f64) {
    // h(z) = N(z)/(z D(z)^j) with N(0) = 0, so h = Ñ/D^j with Ñ = N/z.
    let num = ker.numerator(kind, j);
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in num.iter().skip(1).rev() {
        dp = dp * z + p;
        p = p * z + *c as f64;
    }
    let d = Complex64::new(1.0, 0.0) + z + z * z;
    let dd = Complex64::new(1.0, 0.0) + 2.0 * z;
    let dj = d.powi(j as i32);
    let h = p / dj;
    let dh = (dp * d - p * dd * j as f64) / (dj * d);
    (h.norm(), dh.norm())
}

/// Supremum of `|u_j(z)/z|` or `|v_j(z)/z|` over `S_ρ`.
///
/// The function is analytic on `S_ρ` (the poles `e^{±2πi/3}` lie outside), so by
/// the maximum principle its modulus is maximal on the boundary. By conjugate
/// symmetry the upper half suffices: the arc `e^{iΘ}`, `0 ≤ Θ ≤ ρ`, and the curve
/// `e^{−t + iρt/(1−e^{−t})}` for `0 ≤ t ≤ t*`, where the curve reaches the
/// negative real axis. Each piece is sampled with `grid` cells. The slack uses
/// twice the largest sampled `|h'(z)| |dz|` per unit parameter, which is a
/// numerical majorant rather than an analytic one.
pub fn sup_kernel_on_region(j: usize, kind: KernelKind, rho: f64, grid: usize) -> Result<RegionCertificate> {
    if !(1..=MAX_KERNEL_ORDER).contains(&j) {
        return Err(Error::Contract(format!("kernel order must be 1..={MAX_KERNEL_ORDER}, got {j}")));
    }
    if grid < 2 {
        return Err(Error::Contract(format!("grid size must be at least 2, got {grid}")));
    }
    let region = RegionS::new(rho)?;
    let ker = LogDerivKernels::get();
    let t_star = region.full_circle_depth();

    let arc_h = rho / grid as f64;
    let arc = (0..=grid)
        .into_par_iter()
        .map(|k| {
            let th = arc_h * k as f64;
            let (v, dv) = eval_over_z(ker, kind, j, Complex64::from_polar(1.0, th));
            (v, dv)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    let curve_h = t_star / grid as f64;
    let curve = (0..=grid)
        .into_par_iter()
        .map(|k| {
            let t = curve_h * k as f64;
            let z = region.boundary_curve(t);
            let (v, dv) = eval_over_z(ker, kind, j, z);
            // |dz/dt| = |z| √(1 + Θ'(t)²) with 0 ≤ Θ' ≤ ρ.
            (v, dv * z.norm() * (1.0 + rho * rho).sqrt())
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    let grid_max = arc.0.max(curve.0);
    let slack = (0.5 * arc_h * 2.0 * arc.1).max(0.5 * curve_h * 2.0 * curve.1);
    Ok(RegionCertificate {
        j,
        kind: match kind {
            KernelKind::U => "u",
            KernelKind::V => "v",
        },
        rho,
        grid,
        grid_max,
        derivative_bound: 2.0 * arc.1.max(curve.1),
        certified_sup: grid_max + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_and_nesting() {
        let a = RegionS::new(5.0 / 27.0).unwrap();
        let b = RegionS::new(10.0 / 27.0).unwrap();
        assert!(a.contains(Complex64::new(0.5, 0.0)));
        assert!(a.contains(Complex64::new(0.0, 0.0)));
        assert!(!a.contains(Complex64::from_polar(1.0, 0.3)));
        assert!(b.contains(Complex64::from_polar(1.0, 0.3)));
        for k in 0..200 {
            let z = Complex64::from_polar(0.01 + 0.99 * (k as f64 / 200.0), 3.0 * (k as f64 / 200.0));
            if a.contains(z) {
                assert!(b.contains(z));
            }
        }
        // Deep enough circles are entirely inside.
        let t = a.full_circle_depth();
        assert!(a.contains(Complex64::from_polar((-t - 0.01).exp(), PI)));
    }

    #[test]
    fn sup_at_least_value_at_origin() {
        // u_1(z)/z → 1 at z = 0.
        let c = sup_kernel_on_region(1, KernelKind::U, 5.0 / 27.0, 2000).unwrap();
        assert!(c.certified_sup >= 1.0);
    }

    #[test]
    fn boundary_sup_dominates_interior_samples() {
        let rho = 10.0 / 27.0;
        let region = RegionS::new(rho).unwrap();
        let c = sup_kernel_on_region(3, KernelKind::V, rho, 5000).unwrap();
        let ker = LogDerivKernels::get();
        for a in 0..60 {
            for b in 0..60 {
                let z = Complex64::from_polar(a as f64 / 60.0, -PI + 2.0 * PI * b as f64 / 60.0);
                if region.contains(z) && z.norm() > 0.0 {
                    let v = (ker.v(3, z) / z).norm();
                    assert!(v <= c.certified_sup + 1e-12);
                }
            }
        }
    }
}
