use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoorbitError {
    #[error("dilation parameter must be nonzero and finite, got {0}")]
    ZeroDilation(f64),
    #[error("matrix chart requires a positive dilation, got {0}")]
    NonPositiveDilation(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grids do not match")]
    GridMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("iteration did not converge: {0}")]
    NotConverged(String),
    #[error("iteration diverged: {0}")]
    Diverged(String),
    #[error("frequency {0} is not resolved by the supplied spectrum")]
    UnresolvedFrequency(f64),
    #[error("lattice does not cover the grid domain: {0}")]
    NotCovering(String),
    #[error("oscillation bound {0} is not below one")]
    OscillationTooLarge(f64),
    #[error("group data is inconsistent: {0}")]
    InvalidGroup(String),
    #[error("kernel is degenerate at the identity: |K(e)| = {0:e}")]
    DegenerateKernel(f64),
    #[error("normalized kernel is not idempotent on this grid: residual {0:e}")]
    NotIdempotent(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CoorbitError {
    fn from(e: std::io::Error) -> Self {
        CoorbitError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CoorbitError>;
