use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound for `sup f` on `[a, b]` from `M + 1` equally spaced samples and
/// a bound `D ≥ sup |f'|`: the certified value is `grid_max + (b − a)/M · D`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCertificate {
    pub a: f64,
    pub b: f64,
    pub grid: usize,
    pub grid_max: f64,
    pub argmax: f64,
    pub derivative_bound: f64,
    pub certified_sup: f64,
}

impl GridCertificate {
    /// Whether the certified supremum lies strictly below `limit`.
    pub fn below(&self, limit: f64) -> bool {
        self.certified_sup < limit
    }
}

/// Maximum of `f` over the `M + 1` grid points of `[a, b]` and its location.
pub fn grid_max<F>(f: F, a: f64, b: f64, m: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64 + Sync,
{
    let h = (b - a) / m as f64;
    (0..=m)
        .into_par_iter()
        .map(|i| {
            let x = if i == m { b } else { a + h * i as f64 };
            (f(x), x)
        })
        .reduce(|| (f64::NEG_INFINITY, a), |p, q| if q.0 > p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p })
}

/// Certifies `sup_{[a,b]} f ≤ grid_max + (b − a)/M · derivative_bound`.
pub fn certified_sup<F>(f: F, derivative_bound: f64, a: f64, b: f64, m: usize) -> Result<GridCertificate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if m < 2 {
        return Err(Error::Contract(format!("grid size must be at least 2, got {m}")));
    }
    if !(b > a) {
        return Err(Error::Contract(format!("empty interval [{a}, {b}]")));
    }
    if !(derivative_bound >= 0.0) {
        return Err(Error::Contract(format!("derivative bound must be nonnegative, got {derivative_bound}")));
    }
    let (gmax, argmax) = grid_max(f, a, b, m);
    if !gmax.is_finite() {
        return Err(Error::Contract(format!("function is not finite on the grid (max {gmax} at {argmax})")));
    }
    Ok(GridCertificate {
        a,
        b,
        grid: m,
        grid_max: gmax,
        argmax,
        derivative_bound,
        certified_sup: gmax + (b - a) / m as f64 * derivative_bound,
    })
}
