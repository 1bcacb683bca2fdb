use thiserror::Error;

use crate::linalg::CMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error(
        "trace minimisation did not converge after {} Newton steps \
         (value {:.3e}, min slack {:.3e}, mu {:.3e})",
        .0.iterations, .0.value, .0.min_slack, .0.mu
    )]
    NonConvergence(Box<NonConvergence>),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

/// Last iterate and residuals of a solve that ran out of budget.
#[derive(Debug, Clone)]
pub struct NonConvergence {
    pub last_iterate: CMatrix,
    pub value: f64,
    pub min_slack: f64,
    pub mu: f64,
    pub newton_decrement: f64,
    pub iterations: usize,
}
