use borwein::certify::{beta, beta_integrand, certified_sup, erf, erfc, gamma, grid_max, ln_gamma, lower_gamma};
use statrs::function::{erf as serf, gamma as sgamma};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn special_functions_match_statrs() {
    for i in 0..=400 {
        let x = -6.0 + 12.0 * i as f64 / 400.0;
        assert!((erf(x) - serf::erf(x)).abs() <= 1e-9, "erf({x}): {} vs {}", erf(x), serf::erf(x));
        assert!(close(erfc(x), serf::erfc(x), 1e-8), "erfc({x}): {} vs {}", erfc(x), serf::erfc(x));
    }
    for i in 1..=300 {
        let x = 0.05 * i as f64;
        assert!(close(gamma(x), sgamma::gamma(x), 1e-12), "gamma({x})");
        assert!(close(ln_gamma(x), sgamma::ln_gamma(x), 1e-12) || (ln_gamma(x) - sgamma::ln_gamma(x)).abs() < 1e-13);
        for a in [0.1, 0.5, 1.0, 2.5, 7.0] {
            let ours = lower_gamma(x, a).unwrap();
            let theirs = sgamma::gamma_li(x, a);
            assert!(close(ours, theirs, 1e-10), "lower_gamma({x}, {a}): {ours} vs {theirs}");
        }
    }
}

/// `(2/√π) ∫_0^x e^{−t²} dt` by composite Simpson on 20000 panels.
fn erf_simpson(x: f64) -> f64 {
    let panels = 20_000;
    let h = x / panels as f64;
    let f = |t: f64| (-t * t).exp();
    let mut sum = f(0.0) + f(x);
    for k in 1..panels {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(h * k as f64);
    }
    sum * h / 3.0 * 2.0 / std::f64::consts::PI.sqrt()
}

#[test]
fn erf_matches_quadrature() {
    for i in 0..=300 {
        let x = -5.0 + 10.0 * i as f64 / 300.0;
        assert!((erf(x) - erf_simpson(x)).abs() <= 2e-14, "erf({x}): {} vs {}", erf(x), erf_simpson(x));
    }
}

#[test]
fn erf_matches_high_precision_values() {
    for (x, want) in [
        (0.3, 0.32862675945912741619),
        (1.1, 0.88020506957408172966),
        (2.28, 0.99873766115021905049),
        (2.7, 0.99986566726005947581),
        (4.0, 0.99999998458274209972),
    ] {
        assert!((erf(x) - want).abs() <= 1e-15, "erf({x}) = {} vs {want}", erf(x));
    }
}

#[test]
fn certified_sup_bounds_the_true_maximum() {
    // sup of sin(7x) + x/3 on [0, 4] from a fine scan, derivative bound 7 + 1/3.
    let f = |x: f64| (7.0 * x).sin() + x / 3.0;
    let (fine, _) = grid_max(f, 0.0, 4.0, 2_000_000);
    for m in [10, 100, 1000] {
        let c = certified_sup(f, 7.0 + 1.0 / 3.0, 0.0, 4.0, m).unwrap();
        assert!(c.certified_sup >= fine, "m={m}: {} < {fine}", c.certified_sup);
        assert!(c.grid_max <= fine + 1e-12);
    }
}

#[test]
fn beta_certificate_bounds_a_finer_scan() {
    for i in 1..=4u32 {
        for mu in [0.3, 0.8] {
            let cert = beta(i, mu, 20_000).unwrap();
            let fine = (0..=50_000)
                .map(|k| beta_integrand(i, mu, 80.0 * k as f64 / 50_000.0).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(cert.value >= fine, "i={i} mu={mu}: {} < {fine}", cert.value);
            assert!(cert.grid_bound <= fine * 1.05 + 1e-12, "i={i} mu={mu}: {cert:?} loose vs {fine}");
        }
    }
}
