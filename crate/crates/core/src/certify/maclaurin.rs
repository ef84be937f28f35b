use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Data for the alternating-sum bound over `[0, 3n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaclaurinInputs {
    pub f_0: f64,
    pub f_3n: f64,
    pub f2_0: f64,
    pub f2_3n: f64,
    /// Upper bound for `|f''''|` on `[0, 3n]`.
    pub f4_sup: f64,
}

/// Bound for `|Σ_{k=1}^n (f(3k−2) − f(3k−1))|`:
/// `(1/3)|f(3n) − f(0)| + (2/3)|f''(3n) − f''(0)| + (11n/96) sup |f''''|`.
pub fn maclaurin_alt_bound(inp: &MaclaurinInputs, n: u64) -> Result<f64> {
    if !(inp.f4_sup >= 0.0) {
        return Err(Error::Contract(format!("fourth-derivative bound must be nonnegative, got {}", inp.f4_sup)));
    }
    Ok((inp.f_3n - inp.f_0).abs() / 3.0
        + 2.0 * (inp.f2_3n - inp.f2_0).abs() / 3.0
        + 11.0 * n as f64 / 96.0 * inp.f4_sup)
}
