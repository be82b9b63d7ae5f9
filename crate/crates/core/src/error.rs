use thiserror::Error;

/// Errors produced by the chain, solver and network routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: &'static str, reason: String },

    #[error("{n_sites} sites exceeds the configured maximum of {max_sites}")]
    Capacity { n_sites: usize, max_sites: usize },

    #[error("operator does not commute with parity (largest cross-sector element {magnitude:e})")]
    SymmetryViolation { magnitude: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("operation requires a periodic chain")]
    UnsupportedBoundary,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("site index {index} out of range for {n_sites} sites")]
    SiteOutOfRange { index: usize, n_sites: usize },

    #[error("pair reduction needs two distinct sites, got ({0}, {0})")]
    SamePair(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("parameters outside the domain of the closed form: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
