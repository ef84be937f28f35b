use rayon::prelude::*;
use serde::Serialize;

use super::budget::{final_inequality, mstar, ErrorBudget, ANALYTIC_MIN_N};
use crate::error::{Error, Result};
use crate::qseries::borwein_poly;
use crate::signcheck::{borwein_rule, cube_rule, scan_family, verify_pattern, MRange, SignRule, Violation};

/// Largest `n` verified by full expansion.
pub const FULL_EXACT_MAX_N: u64 = ANALYTIC_MIN_N - 1;

/// From this `n` on the bound already holds at `m = 3n`, for `δ = 1, 2, 3`.
pub fn analytic_threshold(delta: u32) -> u64 {
    match delta {
        1 => 5300,
        2 => 7000,
        _ => 3150,
    }
}

/// How one `n` was verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerifyMode {
    #[serde(rename = "FULL_EXACT")]
    FullExact,
    #[serde(rename = "TRUNCATED_EXACT+ANALYTIC")]
    TruncatedExactAnalytic,
    #[serde(rename = "ANALYTIC")]
    Analytic,
}

impl VerifyMode {
    pub fn label(self) -> &'static str {
        match self {
            VerifyMode::FullExact => "FULL_EXACT",
            VerifyMode::TruncatedExactAnalytic => "TRUNCATED_EXACT+ANALYTIC",
            VerifyMode::Analytic => "ANALYTIC",
        }
    }
}

/// Outcome for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremEntry {
    pub n: u64,
    pub delta: u32,
    pub mode: VerifyMode,
    /// Inclusive range of exponents checked exactly.
    pub exact_range: (usize, usize),
    /// Index from which the analytic bound takes over, when used.
    pub mstar: Option<u64>,
    /// The inequality at `m = 3n` in analytic mode.
    pub budget_at_3n: Option<ErrorBudget>,
    /// Coefficients above the centre are covered by palindromy.
    pub mirrored: bool,
    /// The exact range reaches the analytic index.
    pub covered: bool,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

fn check_theorem_delta(delta: u32) -> Result<()> {
    if !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("theorem must be 1, 2 or 3, got {delta}")));
    }
    Ok(())
}

fn rule_for(n: u64, delta: u32) -> SignRule {
    if delta == 3 {
        cube_rule(n)
    } else {
        borwein_rule(3).expect("modulus 3 is built in")
    }
}

fn full_entry(n: u64, delta: u32, exact_range: (usize, usize), violations: Vec<Violation>) -> TheoremEntry {
    TheoremEntry {
        n,
        delta,
        mode: VerifyMode::FullExact,
        exact_range,
        mstar: None,
        budget_at_3n: None,
        mirrored: false,
        covered: true,
        passed: violations.is_empty(),
        violations,
    }
}

fn large_entry(n: u64, delta: u32, m_limit: Option<usize>) -> Result<TheoremEntry> {
    let centre = (delta as u64 * 3 * n * n / 2) as usize;
    let Some(ms) = mstar(n, delta)? else {
        let s = borwein_poly(n, delta, None)?;
        let rule = rule_for(n, delta);
        let range = rule.bounds_for(&s)?;
        let v = verify_pattern(&s, &rule)?;
        return Ok(full_entry(n, delta, range, v));
    };
    let needed = (ms.mstar.max(3 * n) as usize).min(centre);
    let limit = m_limit.unwrap_or(needed).min(centre);
    let s = borwein_poly(n, delta, Some(limit))?;
    let rule = rule_for(n, delta).with_range(MRange::Range { lo: 0, hi: limit });
    let violations = verify_pattern(&s, &rule)?;
    let analytic = n >= analytic_threshold(delta);
    let budget_at_3n = if analytic { Some(final_inequality(n, 3 * n, delta)?) } else { None };
    let covered = limit >= needed;
    let budget_ok = budget_at_3n.is_none_or(|b| b.verdict);
    Ok(TheoremEntry {
        n,
        delta,
        mode: if analytic { VerifyMode::Analytic } else { VerifyMode::TruncatedExactAnalytic },
        exact_range: (0, limit),
        mstar: Some(ms.mstar),
        budget_at_3n,
        mirrored: delta != 3,
        covered,
        passed: violations.is_empty() && covered && budget_ok,
        violations,
    })
}

/// Verifies the sign pattern of `P_n^δ` for `n ∈ [lo, hi]`: modulo-3 signs
/// `+−−` for `δ = 1, 2`, and for `δ = 3` residues 0 and 1 up to the centre.
///
/// `n ≤ 546` is expanded in full. Larger `n` are checked exactly on
/// `[0, max(m*, 3n)]` (or up to `m_limit` when given) and analytically beyond,
/// where [`mstar`] certifies every index up to the centre; for `δ = 1, 2` the
/// upper half follows by palindromy. If the bound fails on all radii the
/// polynomial is expanded in full. Entries are returned in increasing `n`.
pub fn verify_theorem(delta: u32, lo: u64, hi: u64, m_limit: Option<usize>) -> Result<Vec<TheoremEntry>> {
    check_theorem_delta(delta)?;
    if lo == 0 || lo > hi {
        return Err(Error::Contract(format!("invalid n range {lo}..={hi}")));
    }
    let mut out = Vec::new();
    if lo <= FULL_EXACT_MAX_N {
        let top = hi.min(FULL_EXACT_MAX_N);
        let scan = scan_family(3, delta, lo, top, None, |n| rule_for(n, delta))?;
        out.extend(scan.into_iter().map(|e| full_entry(e.n, delta, e.checked, e.violations)));
    }
    if hi > FULL_EXACT_MAX_N {
        let from = lo.max(FULL_EXACT_MAX_N + 1);
        let large: Vec<Result<TheoremEntry>> =
            (from..=hi).into_par_iter().map(|n| large_entry(n, delta, m_limit)).collect();
        for e in large {
            out.push(e?);
        }
    }
    Ok(out)
}
