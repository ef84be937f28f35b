use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use borwein::bounds::{contour_coefficient, default_points, final_inequality, mstar, verify_theorem};
use borwein::certify::{beta, run_appendix_suite, DEFAULT_GRID, STRICT_GRID};
use borwein::predict::{predict, predict_all, Prediction, PredictorSpec};
use borwein::qseries::{
    andrews_mod3_infinite, borwein_infinite, cyclotomic_quotient, theta_difference_bbg, TruncatedSeries,
};
use borwein::saddle::{log_abs_borwein, solve_radius, SaddleContext};
use borwein::signcheck::{borwein_rule, cube_rule, mod4_rule, mod7_rule, scan_family, SignRule, Violation};

use crate::output::{parse_range, CliError, Outcome, Sink};
use crate::{
    CertifyCommand, CoeffsArgs, CoefficientArgs, Command, ContourCheckArgs, Family, MstarArgs, PlotCircleArgs,
    PredictArgs, PredictCommand, VerifySignArgs, VerifyTheoremArgs,
};

/// Relative agreement required by `contour-check`.
const CONTOUR_TOL: f64 = 1e-6;

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Coeffs(a) => coeffs(a),
        Command::VerifySign(a) => verify_sign(a),
        Command::VerifyTheorem(a) => verify_theorem_cmd(a),
        Command::SolveRadius(a) => solve_radius_cmd(a),
        Command::Bounds(a) => bounds(a),
        Command::Mstar(a) => mstar_cmd(a),
        Command::ContourCheck(a) => contour_check(a),
        Command::Certify(a) => certify(a.command),
        Command::Predict(a) => predict_cmd(a),
        Command::PlotCircle(a) => plot_circle(a),
    }
}

fn check_delta(delta: u32) -> Result<(), CliError> {
    if !(1..=3).contains(&delta) {
        return Err(CliError::Usage(format!("--delta must be 1, 2 or 3, got {delta}")));
    }
    Ok(())
}

fn family_modulus(family: Family, k: Option<u64>) -> Result<u64, CliError> {
    match family {
        Family::Borwein => Ok(3),
        Family::Mod4 => Ok(4),
        Family::Mod5 => Ok(5),
        Family::Mod7 => Ok(7),
        Family::Cyclotomic => k.ok_or_else(|| CliError::Usage("--family cyclotomic needs --K".into())),
        Family::Infinite | Family::Bbg | Family::Andrews => {
            Err(CliError::Usage(format!("family {family:?} is not a finite product in n")))
        }
    }
}

fn series_for(a: &CoeffsArgs) -> Result<TruncatedSeries, CliError> {
    let need_trunc = || a.trunc.ok_or_else(|| CliError::Usage(format!("--family {:?} needs --trunc", a.family)));
    let s = match a.family {
        Family::Infinite => borwein_infinite(a.delta as i32, need_trunc()?)?,
        Family::Bbg => theta_difference_bbg(need_trunc()?)?,
        Family::Andrews => andrews_mod3_infinite(need_trunc()?)?,
        f => {
            check_delta(a.delta)?;
            cyclotomic_quotient(family_modulus(f, a.k)?, a.n, a.delta, a.trunc)?
        }
    };
    Ok(s)
}

fn coeffs(a: CoeffsArgs) -> Result<Outcome, CliError> {
    let s = series_for(&a)?;
    let rows = s.rows().map(|(m, c)| [m.to_string(), c]);
    Sink::open(a.out.as_deref())?.csv(&["m", "coeff"], rows)?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct SignReport {
    family: String,
    delta: u32,
    n: u64,
    checked_range: (usize, usize),
    violations: Vec<Violation>,
}

fn verify_sign(a: VerifySignArgs) -> Result<Outcome, CliError> {
    check_delta(a.delta)?;
    let (lo, hi) = parse_range(&a.n)?;
    if lo == 0 {
        return Err(CliError::Usage("--n must start at 1".into()));
    }
    let k = family_modulus(a.family, None)?;
    let delta = a.delta;
    let fixed: Option<SignRule> = match a.family {
        Family::Borwein if delta == 3 => None,
        Family::Borwein | Family::Mod5 => Some(borwein_rule(k)?),
        Family::Mod7 => Some(mod7_rule()),
        _ => None,
    };
    let family = a.family;
    let entries = scan_family(k, delta, lo, hi, a.m_limit, |n| match (&fixed, family) {
        (Some(r), _) => r.clone(),
        (None, Family::Mod4) => mod4_rule(n, delta).expect("delta checked above"),
        (None, _) => cube_rule(n),
    })?;
    let label = format!("{family:?}").to_lowercase();
    let pass = entries.iter().all(|e| e.violations.is_empty());
    let reports: Vec<SignReport> = entries
        .into_iter()
        .map(|e| SignReport { family: label.clone(), delta, n: e.n, checked_range: e.checked, violations: e.violations })
        .collect();
    Sink::open(a.out.as_deref())?.json(&reports)?;
    Ok(Outcome::from_pass(pass))
}

fn verify_theorem_cmd(a: VerifyTheoremArgs) -> Result<Outcome, CliError> {
    if !(1..=3).contains(&a.theorem) {
        return Err(CliError::Usage(format!("--theorem must be 1, 2 or 3, got {}", a.theorem)));
    }
    let (lo, hi) = parse_range(&a.n)?;
    let entries = verify_theorem(a.theorem, lo, hi, a.m_limit)?;
    let pass = entries.iter().all(|e| e.passed);
    Sink::open(a.out.as_deref())?.json(&entries)?;
    Ok(Outcome::from_pass(pass))
}

fn solve_radius_cmd(a: CoefficientArgs) -> Result<Outcome, CliError> {
    check_delta(a.delta)?;
    let ctx = SaddleContext::new(a.n, a.m, a.delta)?;
    Sink::open(a.out.as_deref())?.json(&ctx)?;
    Ok(Outcome::Pass)
}

fn bounds(a: CoefficientArgs) -> Result<Outcome, CliError> {
    check_delta(a.delta)?;
    let b = final_inequality(a.n, a.m, a.delta)?;
    Sink::open(a.out.as_deref())?.json(&b)?;
    Ok(Outcome::from_pass(b.verdict))
}

fn mstar_cmd(a: MstarArgs) -> Result<Outcome, CliError> {
    check_delta(a.delta)?;
    if a.stride == 0 {
        return Err(CliError::Usage("--stride must be positive".into()));
    }
    let (lo, hi) = parse_range(&a.n)?;
    let ns: Vec<u64> = (lo..=hi).step_by(a.stride as usize).collect();
    let rows: Vec<[String; 3]> = ns
        .par_iter()
        .map(|&n| {
            Ok(match mstar(n, a.delta)? {
                Some(s) => [n.to_string(), format!("{:.12}", s.rstar), s.mstar.to_string()],
                None => [n.to_string(), String::new(), String::new()],
            })
        })
        .collect::<Result<_, borwein::Error>>()?;
    let pass = rows.iter().all(|r| !r[2].is_empty());
    Sink::open(a.out.as_deref())?.csv(&["n", "rstar", "mstar"], rows)?;
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct ContourReport {
    n: u64,
    m: u64,
    delta: u32,
    r: f64,
    points: usize,
    contour_re: f64,
    contour_im: f64,
    exact: String,
    rel_error: f64,
    tolerance: f64,
    passed: bool,
}

fn contour_check(a: ContourCheckArgs) -> Result<Outcome, CliError> {
    check_delta(a.delta)?;
    let points = a.points.unwrap_or_else(|| default_points(a.n, a.delta));
    let r = solve_radius(a.n, a.m.max(1), a.delta)?;
    let v = contour_coefficient(a.n, a.m, a.delta, r, points)?;
    let exact = cyclotomic_quotient(3, a.n, a.delta, None)?.coeff(a.m as usize).unwrap_or_default();
    let exact_f = exact.to_f64().unwrap_or(f64::NAN);
    let rel_error = ((v.re - exact_f).abs()).max(v.im.abs()) / exact_f.abs().max(1.0);
    let passed = rel_error <= CONTOUR_TOL;
    let report = ContourReport {
        n: a.n,
        m: a.m,
        delta: a.delta,
        r,
        points,
        contour_re: v.re,
        contour_im: v.im,
        exact: exact.to_string(),
        rel_error,
        tolerance: CONTOUR_TOL,
        passed,
    };
    Sink::open(a.out.as_deref())?.json(&report)?;
    Ok(Outcome::from_pass(passed))
}

fn certify(c: CertifyCommand) -> Result<Outcome, CliError> {
    let grid = |strict: bool| if strict { STRICT_GRID } else { DEFAULT_GRID };
    match c {
        CertifyCommand::Beta { i, mu, strict, out } => {
            let cert = beta(i, mu, grid(strict))?;
            Sink::open(out.as_deref())?.json(&cert)?;
            Ok(Outcome::Pass)
        }
        CertifyCommand::AppendixSuite { seed, strict, out } => {
            let manifest = run_appendix_suite(seed, grid(strict));
            Sink::open(out.as_deref())?.json(&manifest)?;
            Ok(Outcome::from_pass(manifest.all_passed()))
        }
    }
}

fn predictor(k: u64, offsets: Option<&[u64]>, delta: i32) -> Result<PredictorSpec, CliError> {
    Ok(match offsets {
        Some(o) => PredictorSpec::from_offsets(k, o, delta)?,
        None => PredictorSpec::cyclotomic(k, delta)?,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.10}")).unwrap_or_default()
}

fn scan_rows(all: &[Prediction]) -> Vec<Vec<String>> {
    all.iter()
        .map(|p| {
            let join = |v: &[String]| v.join(" ");
            vec![
                p.residue.to_string(),
                join(&p.dominant_peaks.iter().map(u64::to_string).collect::<Vec<_>>()),
                format!("{:.10}", p.target_at_0),
                format!("{:.10}", p.target_at_1),
                join(&p.roots.iter().map(|r| format!("{r:.10}")).collect::<Vec<_>>()),
                fmt_opt(p.s0),
                fmt_opt(p.fraction),
                p.ambiguous.to_string(),
            ]
        })
        .collect()
}

fn predict_cmd(a: PredictArgs) -> Result<Outcome, CliError> {
    if let Some(PredictCommand::Scan { k, offsets, delta, out }) = a.scan {
        let spec = predictor(k, offsets.as_deref(), delta)?;
        let all = predict_all(&spec)?;
        let header = ["residue", "dominant_peaks", "target_at_0", "target_at_1", "roots", "s0", "fraction", "ambiguous"];
        Sink::open(out.as_deref())?.csv(&header, scan_rows(&all))?;
        return Ok(Outcome::Pass);
    }
    let k = a.k.ok_or_else(|| CliError::Usage("predict needs --K".into()))?;
    let spec = predictor(k, a.offsets.as_deref(), a.delta)?;
    let sink = Sink::open(a.out.as_deref())?;
    match a.residue {
        Some(res) => sink.json(&predict(&spec, res)?)?,
        None => sink.json(&predict_all(&spec)?)?,
    }
    Ok(Outcome::Pass)
}

fn plot_circle(a: PlotCircleArgs) -> Result<Outcome, CliError> {
    check_delta(a.delta)?;
    if a.samples < 16 {
        return Err(CliError::Usage(format!("--samples must be at least 16, got {}", a.samples)));
    }
    if a.n == 0 || !(a.r > 0.0 && a.r.is_finite()) {
        return Err(CliError::Usage(format!("need n >= 1 and r > 0, got n={}, r={}", a.n, a.r)));
    }
    let rows: Vec<[String; 2]> = (0..a.samples)
        .into_par_iter()
        .map(|k| {
            let theta = -PI + 2.0 * PI * k as f64 / a.samples as f64;
            [format!("{theta:.12}"), format!("{:.12e}", log_abs_borwein(a.n, a.delta, a.r, theta))]
        })
        .collect();
    Sink::open(a.out.as_deref())?.csv(&["theta", "log_abs"], rows)?;
    Ok(Outcome::Pass)
}
