use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A power series in `q` with exact integer coefficients, known up to `q^trunc`.
///
/// Coefficients beyond `trunc` are unknown unless `exact_degree` is set, in
/// which case the object is a full polynomial, `trunc == exact_degree` and all
/// higher coefficients are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
    trunc: usize,
    exact_degree: Option<usize>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().take(16).map(|c| c.to_string()).collect();
        write!(
            f,
            "TruncatedSeries {{ trunc: {}, exact_degree: {:?}, coeffs: [{}{}] }}",
            self.trunc,
            self.exact_degree,
            shown.join(", "),
            if self.coeffs.len() > 16 { ", .." } else { "" }
        )
    }
}

impl TruncatedSeries {
    /// Series known up to `trunc`; `coeffs` is padded with zeros or cut to length `trunc + 1`.
    pub fn new(mut coeffs: Vec<BigInt>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, BigInt::zero());
        Self { coeffs, trunc, exact_degree: None }
    }

    /// Full polynomial with the given coefficients. Trailing zeros are dropped.
    /// The zero polynomial is stored as `[0]` with truncation 0 and no degree.
    pub fn polynomial(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        let deg = coeffs.len() - 1;
        let exact_degree = if coeffs[deg].is_zero() { None } else { Some(deg) };
        Self { coeffs, trunc: deg, exact_degree }
    }

    pub fn from_i64(coeffs: &[i64], trunc: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), trunc)
    }

    pub fn polynomial_from_i64(coeffs: &[i64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The constant series 1 known up to `trunc`.
    pub fn one(trunc: usize) -> Self {
        let mut s = Self::new(Vec::new(), trunc);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn zero(trunc: usize) -> Self {
        Self::new(Vec::new(), trunc)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn exact_degree(&self) -> Option<usize> {
        self.exact_degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.exact_degree.is_some()
    }

    /// Coefficient of `q^m`, or `None` when it is unknown. Polynomials report
    /// zero above their degree.
    pub fn coeff(&self, m: usize) -> Option<BigInt> {
        if m <= self.trunc {
            Some(self.coeffs[m].clone())
        } else if self.exact_degree.is_some() {
            Some(BigInt::zero())
        } else {
            None
        }
    }

    /// Truncation used when combining with another series: unbounded for polynomials.
    fn effective_trunc(&self) -> usize {
        if self.exact_degree.is_some() {
            usize::MAX
        } else {
            self.trunc
        }
    }

    /// Restricts to coefficients up to `t`. A polynomial of degree at most `t` is returned unchanged.
    pub fn truncate(&self, t: usize) -> Self {
        if self.exact_degree.is_some_and(|d| d <= t) {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(t + 1);
        Self::new(coeffs, t)
    }

    /// Marks a series as a full polynomial after checking that it is one
    /// up to its truncation (used when the degree is known analytically).
    pub(crate) fn seal_polynomial(mut self, degree: usize) -> Self {
        debug_assert!(degree <= self.trunc);
        self.coeffs.truncate(degree + 1);
        Self::polynomial(self.coeffs)
    }

    fn combine_trunc(&self, other: &Self) -> usize {
        self.effective_trunc().min(other.effective_trunc())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let t = self.combine_trunc(other);
        let zero = BigInt::zero();
        if t == usize::MAX {
            let len = self.coeffs.len().max(other.coeffs.len());
            let coeffs = (0..len)
                .map(|i| op(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
                .collect();
            return Self::polynomial(coeffs);
        }
        let coeffs = (0..=t)
            .map(|i| op(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        Self::new(coeffs, t)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        if self.exact_degree.is_some() {
            Self::polynomial(coeffs)
        } else {
            Self::new(coeffs, self.trunc)
        }
    }

    /// Multiplication by `q^s`.
    pub fn shift(&self, s: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        if self.exact_degree.is_some() {
            Self::polynomial(coeffs)
        } else {
            Self::new(coeffs, self.trunc + s)
        }
    }

    /// Schoolbook product truncated at the smaller of the two truncations.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.combine_trunc(other);
        let deg_cap = if t == usize::MAX { self.coeffs.len() + other.coeffs.len() - 2 } else { t };
        let mut out = vec![BigInt::zero(); deg_cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > deg_cap {
                break;
            }
            if a.is_zero() {
                continue;
            }
            let lim = (deg_cap - i).min(other.coeffs.len() - 1);
            for (j, b) in other.coeffs[..=lim].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        if t == usize::MAX {
            Self::polynomial(out)
        } else {
            Self::new(out, t)
        }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.trunc);
        if self.exact_degree.is_some() {
            acc = Self::polynomial_from_i64(&[1]);
        }
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse by forward substitution. Requires constant term `±1`.
    /// Polynomials are inverted up to their stored truncation.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::InvalidSpec(format!(
                "cannot invert series with constant term {c0} over the integers"
            )));
        }
        let t = self.trunc;
        let mut inv = vec![BigInt::zero(); t + 1];
        inv[0] = c0.clone();
        for m in 1..=t {
            let mut s = BigInt::zero();
            for k in 1..=m {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s += a * &inv[m - k];
                }
            }
            // c0 is its own inverse.
            inv[m] = -(s * c0);
        }
        Ok(Self::new(inv, t))
    }

    /// In-place multiplication by `(1 - q^k)`.
    pub fn mul_one_minus_qk(&mut self, k: usize) {
        assert!(k >= 1);
        if let Some(d) = self.exact_degree {
            let new_deg = d + k;
            self.coeffs.resize(new_deg + 1, BigInt::zero());
            self.trunc = new_deg;
        }
        for i in (k..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] -= &lo[i - k];
        }
        if self.exact_degree.is_some() {
            self.exact_degree = Some(self.coeffs.len() - 1);
        }
    }

    /// In-place multiplication by `1 / (1 - q^k) = 1 + q^k + q^{2k} + ...`.
    /// A polynomial becomes a truncated series at its current truncation;
    /// callers that know the quotient is a polynomial re-seal it.
    pub fn div_one_minus_qk(&mut self, k: usize) {
        assert!(k >= 1);
        self.exact_degree = None;
        for i in k..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] += &lo[i - k];
        }
    }

    /// Substitution `q -> q^k`.
    pub fn dilate(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        if self.exact_degree.is_some() {
            Self::polynomial(coeffs)
        } else {
            let t = self.trunc * k + (k - 1);
            Self::new(coeffs, t)
        }
    }

    /// Splits into residue classes mod `k`: component `r` holds `coeffs[j*k + r]` at index `j`.
    ///
    /// A component whose first exponent `r` exceeds the truncation is
    /// returned as the zero series truncated at 0.
    pub fn residue_decompose(&self, k: usize) -> Vec<Self> {
        assert!(k >= 1);
        (0..k)
            .map(|r| {
                let coeffs: Vec<BigInt> = self.coeffs.iter().skip(r).step_by(k).cloned().collect();
                if self.exact_degree.is_some() {
                    Self::polynomial(coeffs)
                } else if coeffs.is_empty() {
                    Self::zero(0)
                } else {
                    let t = coeffs.len() - 1;
                    Self::new(coeffs, t)
                }
            })
            .collect()
    }

    /// Inverse of [`Self::residue_decompose`]: `sum_r q^r comp_r(q^k)`.
    pub fn recombine(parts: &[Self]) -> Self {
        let k = parts.len();
        let all_poly = parts.iter().all(|p| p.is_polynomial() || p.coeffs.iter().all(Zero::is_zero));
        let len = parts.iter().enumerate().map(|(r, p)| (p.coeffs.len() - 1) * k + r + 1).max().unwrap_or(1);
        let mut coeffs = vec![BigInt::zero(); len];
        for (r, p) in parts.iter().enumerate() {
            for (j, c) in p.coeffs.iter().enumerate() {
                coeffs[j * k + r] += c;
            }
        }
        if all_poly {
            Self::polynomial(coeffs)
        } else {
            let t = parts.iter().enumerate().map(|(r, p)| p.trunc * k + r + k - 1).min().unwrap_or(0);
            let t = t.min(len - 1);
            Self::new(coeffs, t)
        }
    }

    /// True when `coeffs[m] == coeffs[deg - m]` for all `m`.
    pub fn is_palindromic(&self) -> bool {
        let Some(d) = self.exact_degree else { return false };
        (0..=d / 2).all(|m| self.coeffs[m] == self.coeffs[d - m])
    }

    /// Largest absolute coefficient, as a decimal digit count.
    pub fn max_digits(&self) -> usize {
        self.coeffs.iter().map(|c| c.abs().to_string().len()).max().unwrap_or(1)
    }

    /// `(m, coefficient)` rows with decimal coefficients.
    pub fn rows(&self) -> impl Iterator<Item = (usize, String)> + '_ {
        self.coeffs.iter().enumerate().map(|(m, c)| (m, c.to_str_radix(10)))
    }

    pub fn envelope(&self, label: &str) -> SeriesEnvelope {
        SeriesEnvelope {
            label: label.to_string(),
            trunc: self.trunc,
            exact_degree: self.exact_degree,
            coeffs: self.coeffs.iter().map(|c| c.to_str_radix(10)).collect(),
        }
    }

    pub fn from_envelope(env: &SeriesEnvelope) -> Result<Self> {
        let coeffs = env
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::InvalidParams(format!("bad coefficient {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != env.trunc + 1 {
            return Err(Error::InvalidParams(format!(
                "envelope has {} coefficients for truncation {}",
                coeffs.len(),
                env.trunc
            )));
        }
        match env.exact_degree {
            Some(d) if d == env.trunc => Ok(Self::polynomial(coeffs)),
            Some(d) => Err(Error::InvalidParams(format!("exact degree {d} differs from truncation {}", env.trunc))),
            None => Ok(Self::new(coeffs, env.trunc)),
        }
    }
}

/// JSON form of a series. Coefficients are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEnvelope {
    pub label: String,
    pub trunc: usize,
    pub exact_degree: Option<usize>,
    pub coeffs: Vec<String>,
}
