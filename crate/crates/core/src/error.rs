use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock level {n} does not fit in a truncation of {dim} levels")]
    FockOutOfRange { n: usize, dim: usize },

    #[error("truncation of {dim} levels loses {deficit:.3e} of the norm")]
    InsufficientDimension { dim: usize, deficit: f64 },

    #[error("non-positive trace {trace:.6e} at t = {t}")]
    NonPositiveTrace { t: f64, trace: f64 },

    #[error("trace {trace:.6e} at t = {t} exceeds the blow-up bound")]
    TraceBlowup { t: f64, trace: f64 },

    #[error("non-finite entry in the density matrix at t = {t}")]
    NonFinite { t: f64 },

    #[error("trace is not 1 (off by {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("expected {expected} qualifying peaks, found {found}")]
    TooFewPeaks { expected: usize, found: usize },

    #[error("eigenvalue solver failed to converge")]
    NoConvergence,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
