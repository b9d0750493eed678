//! Error types shared across the crate.

use crate::model::Rating;

/// Errors produced by sequence generators, the credit model and the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented domain restriction.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data failed validation (tables, portfolios, configuration).
    #[error("validation error: {0}")]
    Validation(String),

    /// A required data point is missing from a loaded table.
    #[error("missing curve point for rating {rating} at maturity {maturity}")]
    MissingCurvePoint { rating: Rating, maturity: u32 },

    /// The bundled polynomial table cannot seed this many dimensions.
    #[error("dimension {requested} exceeds polynomial table capacity {available}")]
    Capacity { requested: usize, available: usize },

    /// A digital sequence ran past its addressable index range.
    #[error("sequence index {index} out of range (bit precision {bit_precision})")]
    IndexOverflow { index: u64, bit_precision: u32 },

    /// Cholesky factorization hit a negative pivot.
    #[error("matrix is not positive semi-definite: pivot {pivot} is negative")]
    NotPositiveSemiDefinite { pivot: usize },

    /// Vector/matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
