use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree mismatch: expected degree {expected}, found {found}")]
    Degree { expected: usize, found: usize },
    #[error("invalid descent operator: {0}")]
    InvalidSpec(String),
    #[error("not a state space basis: {0}")]
    StateSpace(String),
    #[error("state space has {size} states, above the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("transition matrix row {row} sums to {sum}, not 1")]
    RowSum { row: String, sum: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
