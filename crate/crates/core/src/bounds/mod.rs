//! Peak and tail error bounds, argument control, the final inequality, the
//! `m*(n)` threshold engine and a contour-integral oracle.

mod arg;
mod budget;
mod contour;
mod peak;
mod tail;
mod theorem;

pub use arg::{arg_approx, arg_exact, arg_factor};
pub use budget::{
    cos_floor, cos_value, final_inequality, mstar, uniform_cos_value, ErrorBudget, MStar, ANALYTIC_MIN_N, MSTAR_R_TOL,
};
pub use contour::{
    contour_coefficient, contour_split, default_points, eps0_direct, eps1_direct, fundamental_check, ContourSplit,
    ContourValue, FundamentalCheck, FUNDAMENTAL_SLACK,
};
pub use peak::{fj_bounds, gaussian_error_bound, peak_error_audit, peak_error_bound, GaussianApproxInputs, AUDIT_BETA_GRID};
pub use tail::{tail_error_bound, tail_phi, TAIL_RHO_MAX};
pub use theorem::{analytic_threshold, verify_theorem, TheoremEntry, VerifyMode, FULL_EXACT_MAX_N};
