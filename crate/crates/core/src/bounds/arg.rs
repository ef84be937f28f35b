use std::f64::consts::PI;

use crate::error::{domain, Result};

/// `f(r, x) = −arctan(√3 r^x / (r^x + 2))`, the argument of `1 − (r e^{2πi/3})^x`
/// for `x ≡ 1 (mod 3)` written as a smooth function of real `x`.
pub fn arg_factor(r: f64, x: f64) -> f64 {
    let p = crate::numeric::powk(r, x);
    -(3f64.sqrt() * p / (p + 2.0)).atan()
}

fn check(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain!("radius {r} outside (0, 1]"));
    }
    Ok(())
}

/// `arg P_n(r e^{2πi/3}) = −Σ_{k=1}^{n} (f(r, 3k−1) − f(r, 3k−2))`, in `(−π/18, 0]`.
///
/// Each pair is combined as `arctan a − arctan b = arctan((a − b)/(1 + ab))`
/// with `a − b = 2√3 (p − q)/((p + 2)(q + 2))` and `p − q = r^{3k−2}(r − 1)`,
/// and the pairs are summed from the smallest upwards.
pub fn arg_exact(n: u64, r: f64) -> Result<f64> {
    check(r)?;
    if r == 1.0 {
        return Ok(0.0);
    }
    let s3 = 3f64.sqrt();
    let lr = r.ln();
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        let q = ((3 * k - 2) as f64 * lr).exp();
        let p = q * r;
        let a = s3 * p / (p + 2.0);
        let b = s3 * q / (q + 2.0);
        let diff = 2.0 * s3 * q * (r - 1.0) / ((p + 2.0) * (q + 2.0));
        acc += (diff / (1.0 + a * b)).atan();
    }
    Ok(acc)
}

/// `−π/18 + (1/3) arctan(√3 s/(2 + s))` with `s = r^{3n}`.
pub fn arg_approx(n: u64, r: f64) -> Result<f64> {
    check(r)?;
    let s = crate::numeric::powk(r, 3.0 * n as f64);
    Ok(-PI / 18.0 + (3f64.sqrt() * s / (2.0 + s)).atan() / 3.0)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::saddle::{log_borwein, third_root};

    #[test]
    fn matches_argument_of_the_product() {
        for &(n, r) in &[(5u64, 0.7), (20, 0.95), (60, 0.99)] {
            let z = third_root() * r;
            let l: Complex64 = log_borwein(n, 1, z);
            let a = arg_exact(n, r).unwrap();
            let diff = (l.im - a).rem_euclid(2.0 * PI);
            assert!(diff.min(2.0 * PI - diff) < 1e-10, "n={n} r={r}");
        }
    }

    #[test]
    fn endpoint_and_range() {
        assert_eq!(arg_exact(50, 1.0).unwrap(), 0.0);
        assert!(arg_exact(3, 0.0).is_err());
        let a = arg_exact(100, 0.5).unwrap();
        assert!(a > -PI / 18.0 && a <= 0.0);
        assert!((arg_approx(100, 1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn approximation_error_is_small() {
        for &n in &[50u64, 100, 500] {
            for &r in &[0.9f64, 0.99] {
                let s = r.powf(3.0 * n as f64);
                let d = (arg_exact(n, r).unwrap() - arg_approx(n, r).unwrap()).abs();
                assert!(d <= 10.0 * s / n as f64 + 1e-15, "n={n} r={r} d={d}");
            }
        }
    }
}
