use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::product::{check_trunc, general_product, Length, ProductSpec};
use super::series::TruncatedSeries;

/// Degree of `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ`, namely `δ K (K−1) n² / 2`.
pub fn cyclotomic_degree(k: u64, n: u64, delta: u32) -> u64 {
    delta as u64 * k * (k - 1) * n * n / 2
}

/// `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ = ∏_{k ≤ Kn, K∤k} (1 − q^k)^δ`, either in full
/// or truncated at `trunc`.
pub fn cyclotomic_quotient(k: u64, n: u64, delta: u32, trunc: Option<usize>) -> Result<TruncatedSeries> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("modulus {k} must be at least 2")));
    }
    if n == 0 || delta == 0 {
        return Err(Error::InvalidParams("n and delta must be positive".into()));
    }
    let deg = cyclotomic_degree(k, n, delta);
    let full = trunc.is_none_or(|t| t as u64 >= deg);
    let t = if full { deg as usize } else { trunc.unwrap_or(0) };
    check_trunc(t)?;
    let mut s = TruncatedSeries::one(t);
    extend_cyclotomic(&mut s, k, 1, n, delta);
    Ok(if full { s.seal_polynomial(deg as usize) } else { s })
}

/// Multiplies in the factors `(1 − q^j)^δ` for `K∤j`, `K(from−1) < j ≤ K·to`.
fn extend_cyclotomic(s: &mut TruncatedSeries, k: u64, from: u64, to: u64, delta: u32) {
    let t = s.trunc();
    for j in (k * (from - 1) + 1)..=(k * to) {
        if j % k == 0 || j as usize > t {
            continue;
        }
        for _ in 0..delta {
            s.mul_one_minus_qk(j as usize);
        }
    }
}

/// The Borwein polynomial `P_n^δ = (q;q)_{3n}^δ / (q^3;q^3)_n^δ`.
pub fn borwein_poly(n: u64, delta: u32, trunc: Option<usize>) -> Result<TruncatedSeries> {
    if !(1..=3).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must be 1, 2 or 3, got {delta}")));
    }
    cyclotomic_quotient(3, n, delta, trunc)
}

/// `P_∞^δ` truncated at `trunc`.
pub fn borwein_infinite(delta: i32, trunc: usize) -> Result<TruncatedSeries> {
    general_product(&ProductSpec::borwein_infinite(delta), trunc)
}

/// Runs `visit` on `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ` for every `n` in `[lo, hi]`.
///
/// Each polynomial is obtained from its predecessor by multiplying in the
/// `K − 1` new factors. The range is split into contiguous chunks processed in
/// parallel; results come back in increasing `n`. With `m_limit` set, every
/// polynomial is truncated at `min(m_limit, degree)`.
pub fn sweep_cyclotomic<T, F>(k: u64, delta: u32, lo: u64, hi: u64, m_limit: Option<usize>, visit: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &TruncatedSeries) -> T + Sync,
{
    if lo == 0 || lo > hi {
        return Err(Error::Contract(format!("invalid n range {lo}..={hi}")));
    }
    let max_t = m_limit.map_or(cyclotomic_degree(k, hi, delta), |m| m as u64);
    check_trunc(max_t as usize)?;
    let count = (hi - lo + 1) as usize;
    let workers = rayon::current_num_threads().max(1);
    // Chunks are cut so that later (larger) n get shorter runs.
    let chunks = chunk_ranges(lo, hi, (workers * 4).min(count));
    let nested: Vec<Result<Vec<T>>> = chunks
        .into_par_iter()
        .map(|(a, b)| {
            let mut out = Vec::with_capacity((b - a + 1) as usize);
            let mut current: Option<TruncatedSeries> = None;
            for n in a..=b {
                let deg = cyclotomic_degree(k, n, delta) as usize;
                let t = m_limit.map_or(deg, |m| m.min(deg));
                let s = match current.take() {
                    None => cyclotomic_quotient(k, n, delta, Some(t))?,
                    Some(prev) => grow(prev, k, n, delta, t, deg),
                };
                out.push(visit(n, &s));
                current = Some(s);
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for part in nested {
        out.extend(part?);
    }
    Ok(out)
}

fn grow(prev: TruncatedSeries, k: u64, n: u64, delta: u32, t: usize, deg: usize) -> TruncatedSeries {
    let mut coeffs = prev.into_coeffs();
    coeffs.resize(t + 1, BigInt::zero());
    let mut s = TruncatedSeries::new(coeffs, t);
    extend_cyclotomic(&mut s, k, n, n, delta);
    if t == deg {
        s.seal_polynomial(deg)
    } else {
        s
    }
}

/// Splits `[lo, hi]` into `parts` ranges with roughly equal total cost,
/// taking the cost of `n` proportional to `n³`.
fn chunk_ranges(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = parts.max(1);
    let cost = |n: u64| (n as f64).powi(3) + 1.0;
    let total: f64 = (lo..=hi).map(cost).sum();
    let target = total / parts as f64;
    let mut out = Vec::new();
    let mut start = lo;
    let mut acc = 0.0;
    for n in lo..=hi {
        acc += cost(n);
        if acc >= target && n < hi {
            out.push((start, n));
            start = n + 1;
            acc = 0.0;
        }
    }
    out.push((start, hi));
    out
}

/// `Σ_{m,n} q^{3(m²+mn+n²)} − q Σ_{m,n} q^{3(m²+mn+n²+m+n)}` up to `q^trunc`.
///
/// Both quadratic forms are at least `(m² + n²)/2 − |m| − |n|`, so the box
/// `|m|, |n| ≤ ⌈√trunc⌉ + 2` contains every lattice point with exponent `≤ trunc`.
pub fn theta_difference_bbg(trunc: usize) -> Result<TruncatedSeries> {
    check_trunc(trunc)?;
    let b = (trunc as f64).sqrt().ceil() as i64 + 2;
    let mut c = vec![0i64; trunc + 1];
    for m in -b..=b {
        for n in -b..=b {
            let a = 3 * (m * m + m * n + n * n);
            if a >= 0 && (a as usize) <= trunc {
                c[a as usize] += 1;
            }
            let e = 3 * (m * m + m * n + n * n + m + n) + 1;
            if e >= 0 && (e as usize) <= trunc {
                c[e as usize] -= 1;
            }
        }
    }
    Ok(TruncatedSeries::from_i64(&c, trunc))
}

/// `(q^{α₁},q^{α₂},q^{α₃}; q^{27})_∞` truncated at `trunc`.
fn triple_27(a: [u64; 3], trunc: usize) -> Result<TruncatedSeries> {
    let mut spec = ProductSpec::new(27, "triple");
    for x in a {
        spec = spec.with(x, 1, Length::Infinite);
    }
    general_product(&spec, trunc)
}

/// The three-term numerator identity for `P_∞`:
/// `[(q^{12},q^{15},q^{27};q^{27})_∞ − q(q^6,q^{21},q^{27};q^{27})_∞ − q²(q^3,q^{24},q^{27};q^{27})_∞] / (q^3;q^3)_∞`.
pub fn andrews_mod3_infinite(trunc: usize) -> Result<TruncatedSeries> {
    let num = andrews_numerator(trunc)?;
    let inv = general_product(&ProductSpec::euler_dilated(3, -1), trunc)?;
    Ok(num.mul(&inv))
}

/// Numerator of [`andrews_mod3_infinite`], a series supported on exponents
/// `3j`, `3j+1` and `3j+2` with signs `+`, `−`, `−` respectively.
pub fn andrews_numerator(trunc: usize) -> Result<TruncatedSeries> {
    let a = triple_27([12, 15, 27], trunc)?;
    let b = triple_27([6, 21, 27], trunc)?.shift(1).truncate(trunc);
    let c = triple_27([3, 24, 27], trunc)?.shift(2).truncate(trunc);
    Ok(a.sub(&b).sub(&c))
}

/// `(q;q)_∞² / (q^3;q^3)_∞` truncated at `trunc`.
pub fn kane_square_numerator(trunc: usize) -> Result<TruncatedSeries> {
    let spec = ProductSpec::new(3, "(q;q)^2/(q^3;q^3)")
        .with(1, 2, Length::Infinite)
        .with(2, 2, Length::Infinite)
        .with(3, 1, Length::Infinite);
    general_product(&spec, trunc)
}

/// Gaussian binomial coefficient `[A choose B]_q`, zero outside `0 ≤ B ≤ A`.
pub fn qbinomial(a: u64, b: i64, trunc: Option<usize>) -> Result<TruncatedSeries> {
    if b < 0 || b as u64 > a {
        return Ok(match trunc {
            Some(t) => TruncatedSeries::zero(t),
            None => TruncatedSeries::polynomial_from_i64(&[0]),
        });
    }
    let b = (b as u64).min(a - b as u64);
    let deg = (b * (a - b)) as usize;
    let t = trunc.map_or(deg, |t| t.min(deg));
    check_trunc(t)?;
    // [A choose B] = ∏_{i=1}^{B} (1 − q^{A−B+i}) / (1 − q^i); each partial
    // product is itself a Gaussian binomial, so the divisions are exact.
    let mut s = TruncatedSeries::one(t);
    for i in 1..=b {
        s.mul_one_minus_qk((a - b + i) as usize);
        s.div_one_minus_qk(i as usize);
    }
    Ok(if t == deg { s.seal_polynomial(deg) } else { s })
}

/// `Σ_j (−1)^j q^{j((a+b)j + (a−b))/2} [M+N choose M+Kj]_q` with `a = αK`, `b = βK`.
pub fn bressoud_sum(m: u64, n: u64, k: u64, alpha_k: i64, beta_k: i64) -> Result<TruncatedSeries> {
    if k == 0 {
        return Err(Error::InvalidParams("K must be positive".into()));
    }
    if alpha_k <= 0 || beta_k <= 0 {
        return Err(Error::InvalidParams(format!("alpha = {alpha_k}/{k} and beta = {beta_k}/{k} must be positive")));
    }
    let (mi, ni, ki) = (m as i64, n as i64, k as i64);
    let j_lo = (-mi).div_euclid(ki) - 1;
    let j_hi = ni.div_euclid(ki) + 1;
    let mut terms = Vec::new();
    let mut deg = 0usize;
    for j in j_lo..=j_hi {
        let low = mi + ki * j;
        if low < 0 || low > mi + ni {
            continue;
        }
        let twice = j * ((alpha_k + beta_k) * j + (alpha_k - beta_k));
        if twice % 2 != 0 {
            return Err(Error::InvalidParams(format!("exponent {twice}/2 is not an integer at j={j}")));
        }
        let e = twice / 2;
        if e < 0 {
            return Err(Error::InvalidParams(format!("negative exponent {e} at j={j}")));
        }
        let qb = qbinomial(m + n, low, None)?;
        deg = deg.max(e as usize + qb.coeffs().len() - 1);
        terms.push((j, e as usize, qb));
    }
    let mut acc = vec![BigInt::zero(); deg + 1];
    for (j, e, qb) in terms {
        for (i, c) in qb.coeffs().iter().enumerate() {
            if j % 2 == 0 {
                acc[e + i] += c;
            } else {
                acc[e + i] -= c;
            }
        }
    }
    Ok(TruncatedSeries::polynomial(acc))
}
