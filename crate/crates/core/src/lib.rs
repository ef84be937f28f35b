//! Exact coefficients, sign-pattern checks and saddle-point error bounds for
//! Borwein-type products `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ` and their relatives.
//!
//! * [`qseries`]: exact truncated power series and the product families.
//! * [`signcheck`]: residue-class sign rules and family scans.
//! * [`saddle`]: log-derivative kernels, the `X_j` sums and the radius solver.
//! * [`bounds`]: peak and tail error bounds, argument control and the `m*(n)` engine.
//! * [`certify`]: grid certificates, the `β_i` constants and inequality checks.
//! * [`predict`]: sign-change prediction for general moduli.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod numeric;
pub mod predict;
pub mod qseries;
pub mod saddle;
pub mod signcheck;

pub use error::{Error, Result};
