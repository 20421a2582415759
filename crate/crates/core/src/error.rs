use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("column index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("erasure system is inconsistent with every codeword")]
    InconsistentSystem,

    #[error("row space of rank {rank} exceeds the enumeration limit of {limit}")]
    RowSpaceTooLarge { rank: usize, limit: usize },

    #[error("work budget exceeded: {required} items requested, budget is {budget} (use --force to override)")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
