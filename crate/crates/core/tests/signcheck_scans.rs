use num_bigint::BigInt;
use num_traits::Signed;

use borwein::qseries::borwein_poly;
use borwein::signcheck::{borwein_rule, cube_rule, mod4_rule, scan_family, verify_pattern, Expect, MRange, SignRule};

fn clean(entries: &[borwein::signcheck::ScanEntry]) -> Vec<u64> {
    entries.iter().filter(|e| !e.violations.is_empty()).map(|e| e.n).collect()
}

#[test]
fn borwein_signs_up_to_100() {
    let rule = borwein_rule(3).unwrap();
    let entries = scan_family(3, 1, 1, 100, None, |_| rule.clone()).unwrap();
    assert_eq!(entries.len(), 100);
    assert!(clean(&entries).is_empty());
}

#[test]
fn squared_borwein_signs_up_to_60() {
    let rule = borwein_rule(3).unwrap();
    assert!(clean(&scan_family(3, 2, 1, 60, None, |_| rule.clone()).unwrap()).is_empty());
}

#[test]
fn cubed_borwein_signs_up_to_40() {
    let entries = scan_family(3, 3, 1, 40, None, cube_rule).unwrap();
    assert!(clean(&entries).is_empty());
    assert_eq!(entries[39].checked, (0, 9 * 40 * 40 / 2));
}

#[test]
fn mod5_signs_up_to_30() {
    let rule = borwein_rule(5).unwrap();
    assert!(clean(&scan_family(5, 1, 1, 30, None, |_| rule.clone()).unwrap()).is_empty());
}

#[test]
fn mod4_signs_with_the_small_exception() {
    for delta in 1..=3 {
        let entries = scan_family(4, delta, 1, 24, None, |n| mod4_rule(n, delta).unwrap()).unwrap();
        let bad: Vec<(u64, Vec<usize>)> = entries
            .iter()
            .filter(|e| !e.violations.is_empty())
            .map(|e| (e.n, e.violations.iter().map(|v| v.m).collect()))
            .collect();
        let expected: Vec<(u64, Vec<usize>)> = if delta == 1 { vec![(3, vec![21, 33]), (5, vec![71, 79])] } else { vec![] };
        assert_eq!(bad, expected, "delta={delta}");
    }
}

#[test]
fn truncated_scan_checks_only_the_prefix() {
    let rule = borwein_rule(3).unwrap();
    let entries = scan_family(3, 1, 50, 52, Some(500), |_| rule.clone()).unwrap();
    assert!(entries.iter().all(|e| e.checked == (0, 500) && e.violations.is_empty()));
}

#[test]
fn verify_pattern_agrees_with_naive_check() {
    let s = borwein_poly(12, 2, None).unwrap();
    let rule = SignRule::uniform("test", &[Expect::NonNeg, Expect::NonNeg, Expect::Zero])
        .unwrap()
        .with_range(MRange::Range { lo: 10, hi: 300 });
    let found: Vec<usize> = verify_pattern(&s, &rule).unwrap().iter().map(|v| v.m).collect();
    let naive: Vec<usize> = (10..=300)
        .filter(|&m| {
            let c = s.coeff(m).unwrap_or_default();
            match m % 3 {
                0 | 1 => c.is_negative(),
                _ => c != BigInt::from(0),
            }
        })
        .collect();
    assert_eq!(found, naive);
    assert!(!found.is_empty());
}
