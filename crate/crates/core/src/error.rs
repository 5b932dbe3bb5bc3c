use thiserror::Error;

/// Errors raised by state construction, enumeration and the exact/stochastic engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("state space is empty: {0}")]
    EmptySpace(String),

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parameter mismatch: {0}")]
    ParamsMismatch(String),

    #[error("{name} out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        detail: detail.into(),
    }
}
