use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn borwein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_borwein")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<(String, String)> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.to_string(), b.to_string())
        })
        .collect()
}

#[test]
fn coeffs_of_first_polynomial() {
    let o = borwein(&["coeffs", "--family", "borwein", "--n", "1", "--delta", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "m,coeff\n0,1\n1,-1\n2,-1\n3,1\n");
}

#[test]
fn coeffs_mod4_contains_the_exception() {
    let o = borwein(&["coeffs", "--family", "mod4", "--n", "5", "--delta", "1"]);
    assert!(csv_rows(&o).contains(&("71".into(), "-1".into())));
}

#[test]
fn coeffs_bbg_residue_two_vanishes() {
    let o = borwein(&["coeffs", "--family", "bbg", "--trunc", "50"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 51);
    for (m, c) in rows {
        if m.parse::<u64>().unwrap() % 3 == 2 {
            assert_eq!(c, "0", "m={m}");
        }
    }
}

#[test]
fn plot_circle_has_two_dominant_peaks() {
    let o = borwein(&["plot-circle", "--n", "81", "--r", "0.95", "--samples", "4096"]);
    assert!(o.status.success());
    let pts: Vec<(f64, f64)> =
        csv_rows(&o).iter().map(|(t, v)| (t.parse().unwrap(), v.parse().unwrap())).collect();
    assert_eq!(pts.len(), 4096);
    let max = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let argmax: Vec<f64> = pts.iter().filter(|p| p.1 == max).map(|p| p.0).collect();
    assert!(argmax.iter().all(|t| (t.abs() - 2.0 * PI / 3.0).abs() < 0.05), "{argmax:?}");
    let best_pos = pts.iter().filter(|p| p.0 > 0.0).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let best_neg = pts.iter().filter(|p| p.0 < 0.0).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    assert!((best_pos - best_neg).abs() < 1e-9);
    let at_zero = pts[2048];
    assert_eq!(at_zero.0, 0.0);
    assert!(max - at_zero.1 > 10.0, "gap {}", max - at_zero.1);
    for k in 1..2048 {
        assert!((pts[k].1 - pts[4096 - k].1).abs() <= 1e-12 * pts[k].1.abs().max(1.0), "k={k}");
    }
}

#[test]
fn plot_circle_rejects_few_samples() {
    let o = borwein(&["plot-circle", "--n", "5", "--r", "0.9", "--samples", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_theorem_one_small_range() {
    let o = borwein(&["verify-theorem", "--theorem", "1", "--n", "1..100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 100);
    assert!(entries.iter().all(|e| e["passed"] == true && e["mode"] == "FULL_EXACT"));
}

#[test]
fn verify_theorem_two_truncated_mode() {
    let o = borwein(&["verify-theorem", "--theorem", "2", "--n", "600..610"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for e in v.as_array().unwrap() {
        assert_eq!(e["mode"], "TRUNCATED_EXACT+ANALYTIC");
        assert_eq!(e["passed"], true);
        assert!(e["mstar"].as_u64().unwrap() < 25281);
    }
}

#[test]
fn verify_theorem_three_small_n() {
    let o = borwein(&["verify-theorem", "--theorem", "3", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_theorem_short_override_fails() {
    let o = borwein(&["verify-theorem", "--theorem", "2", "--n", "600", "--m-limit", "2000"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_sign_reports_and_exit_codes() {
    let o = borwein(&["verify-sign", "--family", "borwein", "--delta", "2", "--n", "1..20"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 20);
    assert_eq!(v[19]["checked_range"], serde_json::json!([0, 2 * 3 * 20 * 20]));

    let o = borwein(&["verify-sign", "--family", "mod4", "--delta", "1", "--n", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ms: Vec<u64> = v[0]["violations"].as_array().unwrap().iter().map(|x| x["m"].as_u64().unwrap()).collect();
    assert_eq!(ms, vec![71, 79]);
    assert_eq!(v[0]["violations"][0]["coeff"], "-1");
}

#[test]
fn solve_radius_and_bounds_json() {
    let o = borwein(&["solve-radius", "--n", "20", "--m", "300", "--delta", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = v["r"].as_f64().unwrap();
    assert!(r > 0.0 && r < 1.0 && v["x"].as_array().unwrap().len() == 5);

    let o = borwein(&["bounds", "--n", "7000", "--m", "21000", "--delta", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["eps0"].as_f64().unwrap() <= 0.262 && v["eps1"].as_f64().unwrap() <= 0.079);
}

#[test]
fn bounds_rejects_small_n() {
    let o = borwein(&["bounds", "--n", "100", "--m", "300", "--delta", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mstar_csv() {
    let o = borwein(&["mstar", "--delta", "2", "--n", "547..1547", "--stride", "500"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "n,rstar,mstar");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let m: u64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(m < 25281, "{l}");
    }
}

#[test]
fn contour_check_passes() {
    let o = borwein(&["contour-check", "--n", "10", "--m", "77", "--delta", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], "-9522");
}

#[test]
fn predict_mod7_residue() {
    let o = borwein(&["predict", "--K", "7", "--offsets", "1,2,3", "--residue", "5"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["s0"].as_f64().unwrap() - 0.6089).abs() < 5e-4);
    assert!((v["fraction"].as_f64().unwrap() - 0.3021).abs() < 5e-4);
    let o = borwein(&["predict", "scan", "--K", "6"]);
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn certify_beta_default_grid() {
    let o = borwein(&["certify", "beta", "--i", "1", "--mu", "0.7407407407407407"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b = v["value"].as_f64().unwrap();
    assert!((1.36..=1.40).contains(&b), "{b}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(borwein(&["coeffs", "--family", "cyclotomic", "--n", "2"]).status.code(), Some(2));
    assert_eq!(borwein(&["verify-sign", "--n", "9..3"]).status.code(), Some(2));
    assert_eq!(borwein(&["coeffs", "-n", "3"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_borwein")).arg("coeffs").env("BORWEIN_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_three() {
    let o = borwein(&["coeffs", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|threads| {
            let path = dir.path().join(format!("r{threads}.json"));
            let st = Command::new(env!("CARGO_BIN_EXE_borwein"))
                .args(["verify-sign", "--family", "borwein", "--delta", "1", "--n", "1..40", "--out"])
                .arg(&path)
                .env("BORWEIN_THREADS", threads)
                .status()
                .unwrap();
            assert!(st.success());
            std::fs::read(&path).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a = borwein(&["predict", "scan", "--K", "7"]);
    let b = borwein(&["predict", "scan", "--K", "7"]);
    assert_eq!(a.stdout, b.stdout);
}
