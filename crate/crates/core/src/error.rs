use thiserror::Error;

/// Failure modes shared by every algebraic routine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("mismatched ring contexts")]
    RingMismatch,
    #[error("not bihomogeneous: {0}")]
    NotBihomogeneous(String),
    #[error("computation budget exhausted after {steps} steps")]
    BudgetExhausted { steps: u64 },
    #[error("resolution too short: need length {needed}, have {have}")]
    ResolutionTooShort { needed: usize, have: usize },
    #[error("outside supported scope: {0}")]
    OutOfScope(String),
    #[error("internal consistency failure: {0}")]
    Tripwire(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
