use thiserror::Error;

use crate::linalg::RankReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Gram matrix `HHᵀ` hit a pivot below the relative threshold.
    #[error(
        "matrix is rank deficient: effective rank {} of {} (smallest pivot {:e})",
        .0.effective_rank, .0.rows, .0.smallest_pivot
    )]
    RankDeficient(RankReport),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("residual evaluation produced a non-finite value")]
    NonFiniteResidual,

    #[error("points closer than {0:e}; quotient undefined")]
    ZeroSeparation(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
