use thiserror::Error;

/// Failures reported by the transform kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not in SL(2,R): det = {det}")]
    NotUnimodular { det: f64 },

    #[error("spectrum is aliased: {fraction:e} of the energy sits at |n| >= {cutoff}")]
    Aliased { fraction: f64, cutoff: usize },

    #[error("signal does not decay at the domain edges (edge/max = {ratio:e})")]
    NoDecay { ratio: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("line admissibility constant diverges: |Γ̂(0)|²/max|Γ̂|² = {ratio:e}")]
    Divergent { ratio: f64 },

    #[error("transformed support escapes the half-circle chart")]
    SupportEscape,

    #[error("quadrature did not converge (difference {difference:e})")]
    NonConvergent { difference: f64 },

    #[error("all retained modes are below the frame floor")]
    NoLiveModes,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
