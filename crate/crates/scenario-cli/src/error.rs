//! CLI error taxonomy, mapped onto the process exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// The document is not well-formed JSON or violates the schema.
    #[error("parse error: {0}")]
    Parse(String),
    /// The document is well-formed but inconsistent.
    #[error("invalid scenario: {0}")]
    Validation(String),
    /// A solver failed or one of its invariants was violated.
    #[error("solver error: {0}")]
    Solver(#[from] qstate_discrim::DiscrimError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<qstate_core::CoreError> for CliError {
    fn from(e: qstate_core::CoreError) -> Self {
        CliError::Solver(e.into())
    }
}

impl CliError {
    /// 1 for input problems, 2 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Solver(_) => 2,
        }
    }
}
