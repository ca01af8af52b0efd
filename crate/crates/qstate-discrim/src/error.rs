use qstate_core::CoreError;
use thiserror::Error;

/// Errors raised by the discrimination solvers and oracles.
#[derive(Debug, Error)]
pub enum DiscrimError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("ensemble is empty")]
    EmptyEnsemble,

    #[error("scenario too large: {size} auxiliary states exceed the cap of {cap}")]
    ScenarioTooLarge { size: u128, cap: u128 },

    #[error("search too large: {0}")]
    SearchTooLarge(String),

    #[error("hierarchy violation: {0}")]
    HierarchyViolation(String),

    #[error("mixed state for symbol {label:?} is unsupported here (pure states required)")]
    MixedStateUnsupported { label: String },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),

    #[error("non-unit basis axis with length {0}")]
    NonUnitAxis(f64),
}

pub type Result<T> = std::result::Result<T, DiscrimError>;
