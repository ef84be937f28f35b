use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use borwein::bounds::{
    contour_coefficient, contour_split, default_points, final_inequality, fundamental_check, mstar,
    peak_error_bound, tail_error_bound,
};
use borwein::qseries::borwein_poly;
use borwein::saddle::solve_radius;

#[test]
fn contour_reproduces_exact_coefficients() {
    let n = 10;
    for delta in 1..=3u32 {
        let poly = borwein_poly(n, delta, None).unwrap();
        let centre = delta as u64 * 3 * n * n / 2;
        for m in (0..=centre).step_by(7) {
            let exact = poly.coeff(m as usize).and_then(|c| c.to_f64()).unwrap_or(0.0);
            let r = solve_radius(n, m.max(1), delta).unwrap();
            let v = contour_coefficient(n, m, delta, r, default_points(n, delta)).unwrap();
            assert!((v.re - exact).abs() <= 1e-6 * exact.abs().max(1.0), "delta={delta} m={m}: {} vs {exact}", v.re);
            assert!(v.im.abs() <= 1e-6 * exact.abs().max(1.0));
        }
    }
}

#[test]
fn contour_split_parts_add_up() {
    let (n, m, delta) = (12, 150, 2);
    let r = solve_radius(n, m, delta).unwrap();
    let s = contour_split(n, m, delta, r, default_points(n, delta)).unwrap();
    let sum = s.peak.re + s.tail.re;
    assert!((sum - s.whole.re).abs() <= 1e-9 * s.whole.re.abs().max(1.0));
}

#[test]
fn measured_errors_decide_the_sign() {
    // Whenever the measured error is smaller than |2cos(γ − 2mπ/3)|, the sign
    // of the exact coefficient is that of the main term.
    let mut decided = 0;
    for delta in 1..=3u32 {
        for n in [18u64, 24] {
            let centre = delta as u64 * 3 * n * n / 2;
            for m in (3 * n..=centre).step_by(13) {
                let f = fundamental_check(n, m, delta).unwrap();
                assert!(f.holds, "n={n} m={m} delta={delta}: {f:?}");
                if f.main.abs() > f.eps0 + f.eps1 {
                    decided += 1;
                    assert!(f.coefficient * f.main > 0.0, "n={n} m={m} delta={delta}: {f:?}");
                }
            }
        }
    }
    assert!(decided > 40, "only {decided} coefficients decided");
}

#[test]
fn final_inequality_holds_beyond_mstar() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_2024);
    for n in [1000u64, 2000] {
        let ms = mstar(n, 2).unwrap().expect("m* exists");
        let centre = 3 * n * n;
        for _ in 0..20 {
            let m = rng.gen_range(ms.mstar.max(3 * n)..=centre);
            let b = final_inequality(n, m, 2).unwrap();
            assert!(b.verdict, "n={n} m={m}: {b:?}");
        }
    }
}

#[test]
fn error_terms_decrease_with_radius() {
    for (n, delta) in [(1000u64, 2u32), (5300, 1)] {
        let r_lo = solve_radius(n, 3 * n, delta).unwrap();
        let steps = 40;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=steps {
            let r = r_lo + (1.0 - r_lo) * i as f64 / steps as f64;
            let e0 = peak_error_bound(n, r, delta).unwrap();
            let e1 = tail_error_bound(n, r, delta).unwrap();
            if let Some((p0, p1)) = prev {
                assert!(e0 <= p0 * (1.0 + 1e-9), "eps0 n={n} r={r}: {e0} > {p0}");
                assert!(e1 <= p1 + 1e-8, "eps1 n={n} r={r}: {e1} > {p1}");
            }
            prev = Some((e0, e1));
        }
    }
}
