use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("eigensolver failed to converge for eigenvalue index {index}")]
    SolverFailure { index: usize },

    #[error("truncation not converged at N={cutoff}; last per-level deltas {deltas:?}")]
    NotConverged { cutoff: usize, deltas: Vec<f64> },

    #[error("state tail mass {mass:e} exceeds {limit:e}; raise the Fock cutoff")]
    TailMass { mass: f64, limit: f64 },

    #[error("need {needed} converged levels, spectrum has {available}")]
    InsufficientLevels { needed: usize, available: usize },

    #[error("coupling g={g} sits on a ground-state crossing threshold")]
    Degenerate { g: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        field,
        reason: reason.into(),
    }
}
