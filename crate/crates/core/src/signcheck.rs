//! Residue-class sign rules for series coefficients, violation reports and
//! family scans. A zero coefficient satisfies both `NonNeg` and `NonPos`.

use num_bigint::{BigInt, Sign};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qseries::{cyclotomic_quotient, sweep_cyclotomic, TruncatedSeries};

/// Expected sign of a coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Expect {
    NonNeg,
    NonPos,
    Zero,
    Free,
}

impl Expect {
    pub fn admits(self, c: &BigInt) -> bool {
        match self {
            Expect::NonNeg => c.sign() != Sign::Minus,
            Expect::NonPos => c.sign() != Sign::Plus,
            Expect::Zero => c.sign() == Sign::NoSign,
            Expect::Free => true,
        }
    }
}

/// Expectation for one residue class `m = Kj + res`: `below` applies for
/// `j ≤ cutoff_j`, `above` for larger `j`. Without a cutoff `below` applies everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassRule {
    pub below: Expect,
    pub cutoff_j: Option<u64>,
    pub above: Expect,
}

impl ClassRule {
    pub fn uniform(e: Expect) -> Self {
        Self { below: e, cutoff_j: None, above: e }
    }

    pub fn split(below: Expect, cutoff_j: u64, above: Expect) -> Self {
        Self { below, cutoff_j: Some(cutoff_j), above }
    }

    pub fn at(&self, j: u64) -> Expect {
        match self.cutoff_j {
            Some(c) if j > c => self.above,
            _ => self.below,
        }
    }
}

/// Index range a rule is checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MRange {
    /// Every known coefficient.
    Full,
    /// `lo ≤ m ≤ hi`.
    Range { lo: usize, hi: usize },
}

/// Expected signs for every residue class modulo `modulus` on a range of indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignRule {
    pub label: String,
    pub modulus: u64,
    pub classes: Vec<ClassRule>,
    pub range: MRange,
}

impl SignRule {
    pub fn new(label: impl Into<String>, classes: Vec<ClassRule>, range: MRange) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidParams("a sign rule needs at least one residue class".into()));
        }
        Ok(Self { label: label.into(), modulus: classes.len() as u64, classes, range })
    }

    /// Uniform expectations per residue on the full range.
    pub fn uniform(label: impl Into<String>, expects: &[Expect]) -> Result<Self> {
        Self::new(label, expects.iter().map(|&e| ClassRule::uniform(e)).collect(), MRange::Full)
    }

    pub fn with_range(mut self, range: MRange) -> Self {
        self.range = range;
        self
    }

    pub fn expect_at(&self, m: usize) -> Expect {
        let k = self.modulus as usize;
        self.classes[m % k].at((m / k) as u64)
    }

    /// The inclusive index range checked on `s`.
    pub fn bounds_for(&self, s: &TruncatedSeries) -> Result<(usize, usize)> {
        match self.range {
            MRange::Full => Ok((0, s.trunc())),
            MRange::Range { lo, hi } => {
                if lo > hi {
                    return Err(Error::Contract(format!("empty range {lo}..={hi}")));
                }
                if hi > s.trunc() && !s.is_polynomial() {
                    return Err(Error::Contract(format!(
                        "range end {hi} exceeds the series truncation {}",
                        s.trunc()
                    )));
                }
                Ok((lo, hi))
            }
        }
    }
}

fn as_string<S: Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

/// A coefficient that contradicts its expected sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub m: usize,
    pub residue: u64,
    #[serde(serialize_with = "as_string")]
    pub coeff: BigInt,
    pub expected: Expect,
}

/// All violations of `rule` by `s`, sorted by index.
pub fn verify_pattern(s: &TruncatedSeries, rule: &SignRule) -> Result<Vec<Violation>> {
    let (lo, hi) = rule.bounds_for(s)?;
    let cs = s.coeffs();
    let zero = BigInt::from(0);
    let mut out = Vec::new();
    for m in lo..=hi {
        let c = cs.get(m).unwrap_or(&zero);
        let e = rule.expect_at(m);
        if !e.admits(c) {
            out.push(Violation { m, residue: m as u64 % rule.modulus, coeff: c.clone(), expected: e });
        }
    }
    Ok(out)
}

/// `+−−` modulo 3 or `+−−−−` modulo 5 on the full range.
pub fn borwein_rule(k: u64) -> Result<SignRule> {
    match k {
        3 => SignRule::uniform("borwein-mod3", &[Expect::NonNeg, Expect::NonPos, Expect::NonPos]),
        5 => SignRule::uniform(
            "borwein-mod5",
            &[Expect::NonNeg, Expect::NonPos, Expect::NonPos, Expect::NonPos, Expect::NonPos],
        ),
        _ => Err(Error::Unsupported(format!("no built-in sign rule for modulus {k}"))),
    }
}

/// Half-range cutoffs `(h₁, h₃)` in the index `j` of `4j + 1` and `4j + 3` for
/// `(q;q)_{4n}^δ / (q⁴;q⁴)_n^δ`.
///
/// `n` even: `h₁ = h₃ = ⌊(6δn² − 8)/8⌋`. `n` odd: `h₁ = ⌊(6δn² − 8 + 2δ)/8⌋` and
/// `h₃ = ⌊(6δn² − 6δ + 8χ(δ = 3))/8⌋`.
pub fn mod4_cutoffs(n: u64, delta: u32) -> (u64, u64) {
    let d = delta as i64;
    let base = 6 * d * (n * n) as i64;
    let floor8 = |v: i64| v.div_euclid(8).max(0) as u64;
    if n % 2 == 0 {
        let h = floor8(base - 8);
        (h, h)
    } else {
        let chi = if delta == 3 { 8 } else { 0 };
        (floor8(base - 8 + 2 * d), floor8(base - 6 * d + chi))
    }
}

/// Sign rule for `(q;q)_{4n}^δ / (q⁴;q⁴)_n^δ`: residue 0 nonnegative, residue 2
/// nonpositive, residue 1 nonpositive up to `h₁` then nonnegative, residue 3
/// nonnegative up to `h₃` then nonpositive.
pub fn mod4_rule(n: u64, delta: u32) -> Result<SignRule> {
    if n == 0 || !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("need n >= 1 and delta in 1..=3, got n={n}, delta={delta}")));
    }
    let (h1, h3) = mod4_cutoffs(n, delta);
    SignRule::new(
        format!("mod4-n{n}-d{delta}"),
        vec![
            ClassRule::uniform(Expect::NonNeg),
            ClassRule::split(Expect::NonPos, h1, Expect::NonNeg),
            ClassRule::uniform(Expect::NonPos),
            ClassRule::split(Expect::NonNeg, h3, Expect::NonPos),
        ],
        MRange::Full,
    )
}

/// Sign rule for `(q;q)_{7n} / (q⁷;q⁷)_n`: residue 0 nonnegative, residues
/// 1, 3, 4, 6 nonpositive, residues 2 and 5 unconstrained.
pub fn mod7_rule() -> SignRule {
    use Expect::*;
    SignRule::uniform("mod7", &[NonNeg, NonPos, Free, NonPos, NonPos, Free, NonPos]).expect("seven classes")
}

/// Sign rule for `P_n³`: residue 0 nonnegative and residue 1 nonpositive on `[0, ⌊9n²/2⌋]`.
pub fn cube_rule(n: u64) -> SignRule {
    use Expect::*;
    SignRule::uniform("borwein-cube", &[NonNeg, NonPos, Free])
        .expect("three classes")
        .with_range(MRange::Range { lo: 0, hi: (9 * n * n / 2) as usize })
}

/// Result of checking one member of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub n: u64,
    /// Inclusive index range that was checked.
    pub checked: (usize, usize),
    pub violations: Vec<Violation>,
}

/// Checks `rule(n)` against `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ` for `n ∈ [lo, hi]`.
///
/// With `m_limit` set the polynomials are truncated there and each rule's
/// range is clipped to it. Entries come back in increasing `n`.
pub fn scan_family<R>(k: u64, delta: u32, lo: u64, hi: u64, m_limit: Option<usize>, rule: R) -> Result<Vec<ScanEntry>>
where
    R: Fn(u64) -> SignRule + Sync,
{
    let results = sweep_cyclotomic(k, delta, lo, hi, m_limit, |n, s| {
        let mut r = rule(n);
        if let Some(t) = m_limit {
            r.range = match r.range {
                MRange::Full => MRange::Range { lo: 0, hi: t.min(s.trunc()) },
                MRange::Range { lo, hi } => MRange::Range { lo, hi: hi.min(t).min(s.trunc().max(lo)) },
            };
        }
        let checked = r.bounds_for(s)?;
        Ok(ScanEntry { n, checked, violations: verify_pattern(s, &r)? })
    })?;
    results.into_iter().collect()
}

/// First `j` with `[q^{7j+5}] (q;q)_{7n}/(q⁷;q⁷)_n < 0`, divided by `3n²`.
pub fn mod7_alpha(n: u64) -> Result<Option<f64>> {
    let s = cyclotomic_quotient(7, n, 1, None)?;
    let first = s.coeffs().iter().skip(5).step_by(7).position(|c| c.sign() == Sign::Minus);
    Ok(first.map(|j| j as f64 / (3 * n * n) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{borwein_poly, cyclotomic_quotient};

    /// Brute-force expansion of `∏_{k ≤ Kn, K∤k} (1 − q^k)^δ` with machine integers.
    fn brute(k: u64, n: u64, delta: u32) -> Vec<i128> {
        let mut c = vec![1i128];
        for j in 1..=k * n {
            if j % k == 0 {
                continue;
            }
            for _ in 0..delta {
                let mut next = vec![0i128; c.len() + j as usize];
                for (i, v) in c.iter().enumerate() {
                    next[i] += v;
                    next[i + j as usize] -= v;
                }
                c = next;
            }
        }
        c
    }

    #[test]
    fn borwein_mod3_holds_small() {
        let s = borwein_poly(7, 1, None).unwrap();
        assert!(verify_pattern(&s, &borwein_rule(3).unwrap()).unwrap().is_empty());
        let b = brute(3, 7, 1);
        for (m, v) in b.iter().enumerate() {
            let want = if m % 3 == 0 { *v >= 0 } else { *v <= 0 };
            assert!(want, "m={m}");
        }
    }

    #[test]
    fn rule_shapes() {
        let r = borwein_rule(3).unwrap();
        assert_eq!(r.modulus, 3);
        assert_eq!(r.expect_at(3), Expect::NonNeg);
        assert_eq!(r.expect_at(4), Expect::NonPos);
        let r = borwein_rule(5).unwrap();
        assert_eq!((1..5).map(|m| r.expect_at(m)).collect::<Vec<_>>(), vec![Expect::NonPos; 4]);
        assert!(matches!(borwein_rule(4), Err(Error::Unsupported(_))));
        assert_eq!(mod4_cutoffs(4, 1), (11, 11));
    }

    #[test]
    fn mod4_exceptions_at_n5() {
        let s = cyclotomic_quotient(4, 5, 1, None).unwrap();
        let v = verify_pattern(&s, &mod4_rule(5, 1).unwrap()).unwrap();
        let got: Vec<(usize, i64)> = v.iter().map(|x| (x.m, i64::try_from(&x.coeff).unwrap())).collect();
        assert_eq!(got, vec![(71, -1), (79, 1)]);
        let b = brute(4, 5, 1);
        assert_eq!((b[71], b[79]), (-1, 1));
    }

    #[test]
    fn zero_series_never_violates_signs() {
        let s = TruncatedSeries::zero(40);
        assert!(verify_pattern(&s, &borwein_rule(5).unwrap()).unwrap().is_empty());
        let z = SignRule::uniform("z", &[Expect::Zero]).unwrap();
        assert!(verify_pattern(&TruncatedSeries::from_i64(&[0, 1], 3), &z).unwrap().len() == 1);
    }

    #[test]
    fn range_beyond_truncation_is_a_contract_error() {
        let s = borwein_poly(10, 1, Some(50)).unwrap();
        let r = borwein_rule(3).unwrap().with_range(MRange::Range { lo: 0, hi: 60 });
        assert!(matches!(verify_pattern(&s, &r), Err(Error::Contract(_))));
    }

    #[test]
    fn shrinking_the_range_never_adds_violations() {
        let s = cyclotomic_quotient(4, 6, 1, None).unwrap();
        let wrong = SignRule::uniform("w", &[Expect::NonPos, Expect::NonNeg, Expect::NonNeg, Expect::NonPos]).unwrap();
        let all = verify_pattern(&s, &wrong).unwrap();
        let part = verify_pattern(&s, &wrong.clone().with_range(MRange::Range { lo: 20, hi: 100 })).unwrap();
        assert!(part.len() <= all.len());
        assert!(part.iter().all(|v| all.contains(v)));
    }

    #[test]
    fn palindromic_violations_mirror() {
        // Deliberately wrong rule: the mirror of each violation is again a violation.
        let s = borwein_poly(6, 1, None).unwrap();
        let deg = s.exact_degree().unwrap();
        let wrong = SignRule::uniform("w", &[Expect::NonPos, Expect::NonNeg, Expect::NonNeg]).unwrap();
        let v = verify_pattern(&s, &wrong).unwrap();
        assert!(!v.is_empty());
        for x in &v {
            assert!(v.iter().any(|y| y.m == deg - x.m));
        }
    }

    #[test]
    fn residue_components_are_signed_polynomials() {
        for n in 1..=30 {
            let s = borwein_poly(n, 1, None).unwrap();
            let parts = s.residue_decompose(3);
            let a_ok = parts[0].coeffs().iter().all(|c| c.sign() != Sign::Minus);
            let bc_ok = parts[1..].iter().all(|p| p.coeffs().iter().all(|c| c.sign() != Sign::Plus));
            assert_eq!(a_ok && bc_ok, verify_pattern(&s, &borwein_rule(3).unwrap()).unwrap().is_empty());
            assert!(a_ok && bc_ok);
        }
    }

    #[test]
    fn family_scan_in_order() {
        let rep = scan_family(3, 1, 1, 25, None, |_| borwein_rule(3).unwrap()).unwrap();
        assert_eq!(rep.iter().map(|e| e.n).collect::<Vec<_>>(), (1..=25).collect::<Vec<_>>());
        assert!(rep.iter().all(|e| e.violations.is_empty()));
        let rep = scan_family(3, 3, 1, 12, None, cube_rule).unwrap();
        assert!(rep.iter().all(|e| e.violations.is_empty()));
        let rep = scan_family(3, 2, 20, 22, Some(100), |_| borwein_rule(3).unwrap()).unwrap();
        assert!(rep.iter().all(|e| e.checked == (0, 100)));
    }

    #[test]
    fn mod7_residues_and_alpha() {
        let rep = scan_family(7, 1, 1, 10, None, |_| mod7_rule()).unwrap();
        let found: Vec<(u64, usize, u64)> =
            rep.iter().flat_map(|e| e.violations.iter().map(move |v| (e.n, v.m, v.residue))).collect();
        // Small-n exceptions, mirror pairs under m ↔ 21n² − m.
        assert_eq!(found, vec![(2, 41, 6), (2, 43, 1), (3, 55, 6), (3, 134, 1)]);
        let a = mod7_alpha(10).unwrap().unwrap();
        assert!((a - 0.302).abs() < 0.03, "alpha = {a}");
    }
}
