//! Numeric certification: grid-plus-derivative suprema, the `β_i` constants,
//! kernel suprema over `S_ρ`, the alternating-sum bound, special functions and
//! the property suite for the auxiliary inequalities.

mod appendix;
mod beta;
mod grid;
mod maclaurin;
mod region;
pub mod special;

pub use appendix::{radius_function, run_appendix_suite, PropertyResult, SuiteManifest};
pub use beta::{beta, beta_integrand, scaled_inequality, scaled_mu, BetaCertificate, BETA_W0, DEFAULT_GRID, STRICT_GRID};
pub use grid::{certified_sup, grid_max, GridCertificate};
pub use maclaurin::{maclaurin_alt_bound, MaclaurinInputs};
pub use region::{sup_kernel_on_region, RegionCertificate, RegionS};
pub use special::{erf, erfc, gamma, ln_gamma, lower_gamma};
