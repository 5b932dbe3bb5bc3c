use thiserror::Error;

/// Failures that stop a command before its checks complete.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error(transparent)]
    Core(#[from] exclusion_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Every failure here is a budget, usage or environment problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;
