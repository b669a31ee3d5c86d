//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),

    #[error("genus {got} out of range for {what} (max {max})")]
    GenusOutOfRange {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular over F2")]
    Singular,

    #[error("matrix does not satisfy the symplectic condition")]
    NotSymplectic,

    #[error("invalid characteristic string {0:?}")]
    BadCharacteristic(String),

    #[error("no symplectic element maps {from} to {to}: parities differ")]
    ParityMismatch { from: String, to: String },

    #[error("characteristic has the wrong parity: expected {expected}")]
    WrongParity { expected: &'static str },

    #[error("point rejected from the Siegel upper half-space: {0}")]
    BadSiegelPoint(String),

    #[error("tolerance {tol:e} unreachable: truncation radius would exceed {max_radius}")]
    ToleranceUnreachable { tol: f64, max_radius: usize },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("eigenvalue bookkeeping falsified: {0}")]
    SpectrumFalsified(String),

    #[error("numerical rank inconclusive: gap ratio {gap:.3e} below {required:.1e}")]
    Inconclusive { gap: f64, required: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
