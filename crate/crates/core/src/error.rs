use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (‖H − H†‖_F = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("joint Hilbert space dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("ancilla with gap 2h_b = {gap} rad/ns matches no transition of site {site}")]
    UnmatchedAncilla { gap: f64, site: usize },

    #[error("numerical validation failed at t = {t} ns: {reason}")]
    NumericalAbort { t: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
