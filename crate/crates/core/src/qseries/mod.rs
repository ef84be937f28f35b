//! Exact power-series arithmetic over arbitrary-precision integers and the
//! product families built on it.

mod families;
mod product;
mod series;

pub use families::{
    andrews_mod3_infinite, andrews_numerator, borwein_infinite, borwein_poly, bressoud_sum, cyclotomic_degree,
    cyclotomic_quotient, kane_square_numerator, qbinomial, sweep_cyclotomic, theta_difference_bbg,
};
pub use product::{general_product, Factor, Length, Offset, ProductSpec, MAX_TRUNC};
pub use series::{SeriesEnvelope, TruncatedSeries};

/// Splits `s` into its `K` residue-class components; see [`TruncatedSeries::residue_decompose`].
pub fn residue_decompose(s: &TruncatedSeries, k: usize) -> Vec<TruncatedSeries> {
    s.residue_decompose(k)
}
