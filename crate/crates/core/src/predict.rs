//! Sign-pattern prediction for `∏ (q^α; q^K)_n^{δ_α}` from the arguments of
//! the dominant saddle-point peaks at the roots of unity `e^{2πiℓ/K}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::adaptive_simpson;
use crate::qseries::ProductSpec;

/// Peaks whose log-magnitudes are within `DOMINANCE_TOL · n` of the largest are co-dominant.
pub const DOMINANCE_TOL: f64 = 0.01;

/// Length and `s = r^{Kn}` at which the dominant peaks of a predictor are chosen.
pub const REFERENCE_N: u64 = 200;
pub const REFERENCE_S: f64 = 0.5;

/// Number of cells in the sign-change scan of [`sign_change_root`].
pub const SCAN_CELLS: usize = 1024;

/// Bisection tolerance on `s` in [`sign_change_root`].
pub const ROOT_TOL: f64 = 1e-10;

/// Target values below this in modulus count as zero and never start a sign change.
pub const ZERO_TOL: f64 = 1e-9;

/// Offsets `α` (with multiplicities) of a product over modulus `K`; lengths are
/// left out, every factor being taken of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictorSpec {
    pub modulus: u64,
    /// `(α, multiplicity)` with `0 < α ≤ K`.
    pub factors: Vec<(u64, i32)>,
}

impl PredictorSpec {
    pub fn new(modulus: u64, factors: Vec<(u64, i32)>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidSpec(format!("modulus must be at least 2, got {modulus}")));
        }
        if factors.is_empty() {
            return Err(Error::InvalidSpec("no factors".into()));
        }
        for &(a, m) in &factors {
            if a == 0 || a > modulus {
                return Err(Error::InvalidSpec(format!("offset {a} outside (0, {modulus}]")));
            }
            if m == 0 {
                return Err(Error::InvalidSpec("zero multiplicity".into()));
            }
        }
        Ok(Self { modulus, factors })
    }

    /// `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ`: offsets `1, …, K−1` with multiplicity `δ`.
    pub fn cyclotomic(modulus: u64, delta: i32) -> Result<Self> {
        Self::new(modulus, (1..modulus).map(|a| (a, delta)).collect())
    }

    /// The given offsets together with their partners `K − α`, each with multiplicity `δ`.
    pub fn from_offsets(modulus: u64, offsets: &[u64], delta: i32) -> Result<Self> {
        let mut all: Vec<u64> = Vec::new();
        for &a in offsets {
            if a == 0 || a >= modulus {
                return Err(Error::InvalidSpec(format!("offset {a} outside (0, {modulus})")));
            }
            all.push(a);
            all.push(modulus - a);
        }
        all.sort_unstable();
        all.dedup();
        Self::new(modulus, all.into_iter().map(|a| (a, delta)).collect())
    }

    /// Offsets and multiplicities of a [`ProductSpec`]; lengths are dropped.
    pub fn from_product(spec: &ProductSpec) -> Result<Self> {
        spec.validate()?;
        let mut factors = Vec::new();
        for f in &spec.factors {
            let a = f.offset.as_integer().ok_or_else(|| Error::InvalidSpec("non-integer offset".into()))?;
            factors.push((a, f.multiplicity));
        }
        Self::new(spec.modulus, factors)
    }

    fn active(&self) -> impl Iterator<Item = (u64, i32)> + '_ {
        let k = self.modulus;
        self.factors.iter().copied().filter(move |&(a, _)| a % k != 0)
    }
}

/// One candidate peak direction `θ_ℓ = 2πℓ/K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub ell: u64,
    pub theta: f64,
    pub log_magnitude: f64,
    pub dominant: bool,
}

/// Candidate peaks `ℓ = 1, …, ⌊K/2⌋` at a sample `(n, r)`; each stands for the pair `±θ_ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakSet {
    pub modulus: u64,
    pub n: u64,
    pub r: f64,
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn dominant(&self) -> Vec<u64> {
        self.peaks.iter().filter(|p| p.dominant).map(|p| p.ell).collect()
    }
}

/// `Σ_α δ_α Σ_{i<n} log|1 − r^{α+iK} e^{i(α+iK)θ}|`.
pub fn log_magnitude(spec: &PredictorSpec, n: u64, r: f64, theta: f64) -> f64 {
    let k = spec.modulus;
    let lr = r.ln();
    let one = Complex64::new(1.0, 0.0);
    let mut acc = 0.0;
    for &(a, mult) in &spec.factors {
        let mut part = 0.0;
        for i in 0..n {
            let e = (a + i * k) as f64;
            part += (one - Complex64::from_polar((e * lr).exp(), e * theta)).norm().ln();
        }
        acc += mult as f64 * part;
    }
    acc
}

/// Evaluates every candidate direction and flags those within
/// [`DOMINANCE_TOL`]`· n` of the maximal log-magnitude.
pub fn dominant_peaks(spec: &PredictorSpec, n: u64, r: f64) -> Result<PeakSet> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParams(format!("sample radius must lie in (0, 1), got {r}")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let k = spec.modulus;
    let mut peaks: Vec<Peak> = (1..=k / 2)
        .into_par_iter()
        .map(|ell| {
            let theta = 2.0 * PI * ell as f64 / k as f64;
            Peak { ell, theta, log_magnitude: log_magnitude(spec, n, r, theta), dominant: false }
        })
        .collect();
    let top = peaks.iter().map(|p| p.log_magnitude).fold(f64::NEG_INFINITY, f64::max);
    for p in &mut peaks {
        p.dominant = p.log_magnitude >= top - DOMINANCE_TOL * n as f64;
    }
    Ok(PeakSet { modulus: k, n, r, peaks })
}

/// Dominant peaks at [`REFERENCE_N`] and `s = r^{Kn} =` [`REFERENCE_S`].
pub fn reference_peaks(spec: &PredictorSpec) -> Result<PeakSet> {
    let r = REFERENCE_S.powf(1.0 / (spec.modulus * REFERENCE_N) as f64);
    dominant_peaks(spec, REFERENCE_N, r)
}

/// Argument contributed at `θ` by the pair `(q^α; q^K)_n (q^{K−α}; q^K)_n`:
/// `−((K − 2α)/K) arctan((1 − s) cot(αθ/2) / (1 + s))` with `s = r^{Kn}`,
/// up to an `O(s/n)` error.
pub fn peak_argument_contribution(alpha: u64, k: u64, theta: f64, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParams(format!("s must lie in [0, 1], got {s}")));
    }
    if 2 * alpha == k {
        return Ok(0.0);
    }
    let half = alpha as f64 * theta / 2.0;
    let sin = half.sin();
    if sin.abs() < 1e-12 {
        return Err(Error::Singular(format!("cot(αθ/2) has a pole at α = {alpha}, θ = {theta}")));
    }
    let cot = half.cos() / sin;
    let kf = k as f64;
    Ok(-((kf - 2.0 * alpha as f64) / kf) * ((1.0 - s) * cot / (1.0 + s)).atan())
}

/// Argument of the product at the peak `θ_ℓ`: each factor `(q^α; q^K)_n^δ`
/// adds `δ/2` times the pair contribution of `α`; offsets `α ≡ 0 (mod K)` add nothing.
pub fn peak_argument(spec: &PredictorSpec, ell: u64, s: f64) -> Result<f64> {
    let k = spec.modulus;
    let theta = 2.0 * PI * ell as f64 / k as f64;
    let mut acc = 0.0;
    for (a, mult) in spec.active() {
        acc += 0.5 * mult as f64 * peak_argument_contribution(a, k, theta, s)?;
    }
    Ok(acc)
}

/// `Σ_{ℓ dominant} 2cos(arg_ℓ(s) − 2πℓ·res/K)`; its sign predicts the sign of
/// the coefficients of `q^m`, `m ≡ res (mod K)`, in the regime `r^{Kn} ≈ s`.
pub fn general_target(spec: &PredictorSpec, dominant: &[u64], residue: u64, s: f64) -> Result<f64> {
    let k = spec.modulus as f64;
    let mut acc = 0.0;
    for &ell in dominant {
        let shift = 2.0 * PI * ell as f64 * (residue % spec.modulus) as f64 / k;
        acc += 2.0 * (peak_argument(spec, ell, s)? - shift).cos();
    }
    Ok(acc)
}

/// Zeros of [`general_target`] on `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub residue: u64,
    pub dominant: Vec<u64>,
    pub target_at_0: f64,
    pub target_at_1: f64,
    pub roots: Vec<f64>,
    /// More than one sign change was found.
    pub ambiguous: bool,
}

impl RootReport {
    /// The root when it is unique.
    pub fn root(&self) -> Option<f64> {
        if self.roots.len() == 1 {
            Some(self.roots[0])
        } else {
            None
        }
    }
}

/// Scans `[0, 1]` with [`SCAN_CELLS`] cells and bisects every sign change to
/// [`ROOT_TOL`]. Nodes where the target vanishes up to [`ZERO_TOL`] are
/// skipped, so touching zeros and zeros at the endpoints are not reported.
pub fn sign_change_root(spec: &PredictorSpec, residue: u64) -> Result<RootReport> {
    let dominant = reference_peaks(spec)?.dominant();
    let f = |s: f64| general_target(spec, &dominant, residue, s);
    let values: Vec<f64> = (0..=SCAN_CELLS).map(|i| f(i as f64 / SCAN_CELLS as f64)).collect::<Result<_>>()?;
    let sign = |v: f64| if v.abs() <= ZERO_TOL { 0 } else if v > 0.0 { 1 } else { -1 };
    let mut roots = Vec::new();
    let mut last: Option<(usize, i32)> = None;
    for (i, &v) in values.iter().enumerate() {
        let sg = sign(v);
        if sg == 0 {
            continue;
        }
        if let Some((j, prev)) = last {
            if prev != sg {
                let (mut lo, mut hi) = (j as f64 / SCAN_CELLS as f64, i as f64 / SCAN_CELLS as f64);
                while hi - lo > ROOT_TOL {
                    let mid = 0.5 * (lo + hi);
                    if sign(f(mid)?) == prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        last = Some((i, sg));
    }
    Ok(RootReport {
        residue,
        ambiguous: roots.len() > 1,
        target_at_0: values[0],
        target_at_1: values[SCAN_CELLS],
        dominant,
        roots,
    })
}

/// `G(c, x) = −Re(ζ^c x/(1 − ζ^c x))` with `ζ = e^{2πi/K}`, multiplied by `u`,
/// at `x = s^u`. For `c ≡ 0 (mod K)` the product has the finite limit `1/log s` at `u = 0`.
fn weighted_kernel(c: u64, k: u64, s: f64, u: f64) -> f64 {
    let ls = s.ln();
    if c % k == 0 {
        if u == 0.0 {
            return 1.0 / ls;
        }
        let x = (u * ls).exp();
        return -u * x / -(u * ls).exp_m1();
    }
    let w = Complex64::from_polar((u * ls).exp(), 2.0 * PI * c as f64 / k as f64);
    -u * (w / (Complex64::new(1.0, 0.0) - w)).re
}

/// Predicted position `m/deg` of the sign change at `s₀ = r^{Kn}`:
/// `(2/Σδ_α) Σ_α δ_α ∫₀¹ u · avg_{ℓ dominant} G(ℓα, s₀^u) du`, by adaptive
/// Simpson with tolerance `10⁻⁹`. Tends to `1/2` as `s₀ → 1`.
pub fn fraction_at_root(spec: &PredictorSpec, s0: f64) -> Result<f64> {
    if !(s0 > 0.0 && s0 <= 1.0) {
        return Err(Error::InvalidParams(format!("s0 must lie in (0, 1], got {s0}")));
    }
    if s0 == 1.0 {
        return Ok(0.5);
    }
    let dominant = reference_peaks(spec)?.dominant();
    let k = spec.modulus;
    let total: f64 = spec.active().map(|(_, m)| m as f64).sum();
    if total == 0.0 {
        return Err(Error::InvalidSpec("multiplicities cancel".into()));
    }
    let mut acc = 0.0;
    for (a, mult) in spec.active() {
        let g = |u: f64| dominant.iter().map(|&l| weighted_kernel(l * a, k, s0, u)).sum::<f64>() / dominant.len() as f64;
        acc += mult as f64 * adaptive_simpson(g, 0.0, 1.0, 1e-9);
    }
    Ok(2.0 * acc / total)
}

/// Everything the predictor says about one residue class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub modulus: u64,
    pub residue: u64,
    pub dominant_peaks: Vec<u64>,
    pub target_at_0: f64,
    pub target_at_1: f64,
    pub s0: Option<f64>,
    pub roots: Vec<f64>,
    pub ambiguous: bool,
    pub fraction: Option<f64>,
}

/// [`sign_change_root`] and, for a unique root, [`fraction_at_root`].
pub fn predict(spec: &PredictorSpec, residue: u64) -> Result<Prediction> {
    let rep = sign_change_root(spec, residue)?;
    let fraction = rep.root().map(|s| fraction_at_root(spec, s)).transpose()?;
    Ok(Prediction {
        modulus: spec.modulus,
        residue,
        dominant_peaks: rep.dominant.clone(),
        target_at_0: rep.target_at_0,
        target_at_1: rep.target_at_1,
        s0: rep.root(),
        roots: rep.roots.clone(),
        ambiguous: rep.ambiguous,
        fraction,
    })
}

/// [`predict`] for every residue modulo `K`.
pub fn predict_all(spec: &PredictorSpec) -> Result<Vec<Prediction>> {
    (0..spec.modulus).into_par_iter().map(|res| predict(spec, res)).collect()
}
