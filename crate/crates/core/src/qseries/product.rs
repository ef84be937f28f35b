use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::series::TruncatedSeries;

/// Largest coefficient vector the constructors will allocate.
pub const MAX_TRUNC: usize = 1 << 28;

pub(crate) fn check_trunc(trunc: usize) -> Result<()> {
    if trunc >= MAX_TRUNC {
        Err(Error::Resource(format!("truncation {trunc} exceeds the supported maximum {MAX_TRUNC}")))
    } else {
        Ok(())
    }
}

/// Number of factors in a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Length {
    Finite(u64),
    Infinite,
}

/// A positive rational offset `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offset {
    pub num: u64,
    pub den: u64,
}

impl Offset {
    pub fn integer(a: u64) -> Self {
        Self { num: a, den: 1 }
    }

    /// The offset as an integer exponent, if it is one.
    pub fn as_integer(&self) -> Option<u64> {
        (self.den != 0 && self.num % self.den == 0).then(|| self.num / self.den)
    }
}

/// One factor `(q^α; q^K)_L^δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub offset: Offset,
    pub multiplicity: i32,
    pub length: Length,
}

/// A product `∏_j (q^{α_j}; q^K)_{L_j}^{δ_j}` over a common modulus `K`.
///
/// Offsets satisfy `0 < α ≤ K`; the upper end `α = K` expresses factors such
/// as `(q^K; q^K)_n`. Negative multiplicities divide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub modulus: u64,
    pub factors: Vec<Factor>,
    pub label: String,
}

impl ProductSpec {
    pub fn new(modulus: u64, label: impl Into<String>) -> Self {
        Self { modulus, factors: Vec::new(), label: label.into() }
    }

    /// Appends `(q^α; q^K)_L^δ` with an integer offset.
    pub fn with(mut self, alpha: u64, multiplicity: i32, length: Length) -> Self {
        self.factors.push(Factor { offset: Offset::integer(alpha), multiplicity, length });
        self
    }

    /// `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ`, written over modulus `K` as the
    /// offsets `1..K-1`, each of length `n`.
    pub fn cyclotomic_quotient(k: u64, n: u64, delta: i32) -> Self {
        let mut spec = Self::new(k, format!("(q;q)_{{{k}n}}^{delta}/(q^{k};q^{k})_n^{delta}, n={n}"));
        for a in 1..k {
            spec = spec.with(a, delta, Length::Finite(n));
        }
        spec
    }

    /// `(q;q)_∞^δ / (q^3;q^3)_∞^δ = (q;q^3)_∞^δ (q^2;q^3)_∞^δ`.
    pub fn borwein_infinite(delta: i32) -> Self {
        Self::new(3, format!("P_inf^{delta}"))
            .with(1, delta, Length::Infinite)
            .with(2, delta, Length::Infinite)
    }

    /// `(q^K;q^K)_∞^δ`; negative `δ` gives the reciprocal.
    pub fn euler_dilated(k: u64, delta: i32) -> Self {
        Self::new(k, format!("(q^{k};q^{k})_inf^{delta}")).with(k, delta, Length::Infinite)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modulus == 0 {
            return Err(Error::InvalidSpec("modulus must be positive".into()));
        }
        for f in &self.factors {
            let Some(a) = f.offset.as_integer() else {
                return Err(Error::InvalidSpec(format!(
                    "offset {}/{} does not give integer exponents",
                    f.offset.num, f.offset.den
                )));
            };
            if a == 0 || a > self.modulus {
                return Err(Error::InvalidSpec(format!("offset {a} outside (0, {}]", self.modulus)));
            }
            if f.multiplicity == 0 {
                return Err(Error::InvalidSpec("zero multiplicity".into()));
            }
            if f.length == Length::Finite(0) {
                return Err(Error::InvalidSpec("zero factor length".into()));
            }
        }
        Ok(())
    }

    /// Binomial exponents `α + iK` of one factor that lie in `[1, trunc]`.
    /// For infinite factors this is the cap `L = ⌊(trunc − α)/K⌋ + 1`.
    fn exponents(&self, f: &Factor, trunc: usize) -> impl Iterator<Item = usize> {
        let a = f.offset.as_integer().unwrap_or(0) as usize;
        let k = self.modulus as usize;
        let cap = if a > trunc { 0 } else { (trunc - a) / k + 1 };
        let len = match f.length {
            Length::Finite(l) => (l as usize).min(cap),
            Length::Infinite => cap,
        };
        (0..len).map(move |i| a + i * k)
    }

    /// Degree when every factor is finite with positive multiplicity.
    pub fn polynomial_degree(&self) -> Option<u64> {
        let k = self.modulus;
        let mut deg = 0u64;
        for f in &self.factors {
            let Length::Finite(l) = f.length else { return None };
            if f.multiplicity < 0 {
                return None;
            }
            let a = f.offset.as_integer()?;
            deg += f.multiplicity as u64 * (l * a + k * l * (l - 1) / 2);
        }
        Some(deg)
    }
}

/// Expands a product up to `q^trunc`.
///
/// Each binomial factor `(1 − q^e)` is applied in place; division uses the
/// truncated geometric series `1 + q^e + q^{2e} + …`, i.e. the inverse of the
/// factor obtained by forward substitution. Factors are processed in order of
/// increasing exponent. The result always carries truncation `trunc`, even
/// when the spec describes a polynomial of smaller degree.
pub fn general_product(spec: &ProductSpec, trunc: usize) -> Result<TruncatedSeries> {
    spec.validate()?;
    check_trunc(trunc)?;
    let mut ops: Vec<(usize, i32)> = Vec::new();
    for f in &spec.factors {
        for e in spec.exponents(f, trunc) {
            ops.push((e, f.multiplicity));
        }
    }
    ops.sort_by_key(|&(e, d)| (e, -d));
    let mut s = TruncatedSeries::one(trunc);
    for (e, d) in ops {
        if d > 0 {
            for _ in 0..d {
                s.mul_one_minus_qk(e);
            }
        } else {
            for _ in 0..(-d) {
                s.div_one_minus_qk(e);
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_one() {
        let s = general_product(&ProductSpec::new(3, "empty"), 5).unwrap();
        assert_eq!(s, TruncatedSeries::from_i64(&[1, 0, 0, 0, 0, 0], 5));
    }

    #[test]
    fn mod5_quotient_n1() {
        let spec = ProductSpec::cyclotomic_quotient(5, 1, 1);
        let s = general_product(&spec, 10).unwrap();
        // (1-q)(1-q^2)(1-q^3)(1-q^4) expanded by hand.
        let expect = [1, -1, -1, 0, 0, 2, 0, 0, -1, -1, 1];
        assert_eq!(s, TruncatedSeries::from_i64(&expect, 10));
        assert_eq!(spec.polynomial_degree(), Some(10));
    }

    #[test]
    fn infinite_cap_stops_at_truncation() {
        let spec = ProductSpec::new(4, "x").with(3, 1, Length::Infinite);
        let f = &spec.factors[0];
        let e: Vec<usize> = spec.exponents(f, 11).collect();
        assert_eq!(e, vec![3, 7, 11]);
        assert_eq!(spec.exponents(f, 2).count(), 0);
    }

    #[test]
    fn invalid_specs_rejected() {
        let bad = ProductSpec::new(3, "x").with(4, 1, Length::Finite(2));
        assert!(matches!(general_product(&bad, 4), Err(Error::InvalidSpec(_))));
        let mut frac = ProductSpec::new(3, "x");
        frac.factors.push(Factor { offset: Offset { num: 1, den: 2 }, multiplicity: 1, length: Length::Finite(1) });
        assert!(matches!(general_product(&frac, 4), Err(Error::InvalidSpec(_))));
        assert!(matches!(general_product(&ProductSpec::new(3, "x"), MAX_TRUNC), Err(Error::Resource(_))));
    }

    #[test]
    fn division_inverts_multiplication() {
        let spec = ProductSpec::new(3, "x").with(1, 2, Length::Finite(4)).with(1, -2, Length::Finite(4));
        assert_eq!(general_product(&spec, 30).unwrap(), TruncatedSeries::one(30));
    }
}
