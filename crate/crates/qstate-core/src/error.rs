use thiserror::Error;

/// Errors raised while constructing or validating the core domain types.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("POVM completeness violated: deficit norm {deficit_norm:.3e}")]
    IncompletePovm { deficit_norm: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("negative probability {value:.3e} beyond tolerance")]
    NegativeProbability { value: f64 },
}

pub type Result<T> = std::result::Result<T, CoreError>;
