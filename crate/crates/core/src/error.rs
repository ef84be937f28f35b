use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A product description cannot be expanded.
    #[error("invalid product spec: {0}")]
    InvalidSpec(String),
    /// Parameters of a constructor are inconsistent.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// A caller broke an operation's contract (bad range, bad grid size...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// The requested case is not covered by the available bounds.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The evaluation point hits a pole.
    #[error("singularity: {0}")]
    Singular(String),
    /// The computation would not fit in memory.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
