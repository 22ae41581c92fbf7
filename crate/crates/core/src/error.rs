use thiserror::Error;

/// Errors shared by the verification kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension n = {0}; need n >= 2")]
    InvalidDimension(usize),

    #[error("vector is not unit length: |X| = {0}")]
    NonUnitVector(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate polytope: {0}")]
    DegeneratePolytope(String),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
