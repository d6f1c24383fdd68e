//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("map collapsed under composition (components proportional)")]
    CollapsedMap,
    #[error("evaluation at a base point")]
    BasePointEvaluation,
    #[error("triple is not simplified (components share a factor)")]
    NotSimplified,
    #[error("base point is not rational over the ground field; irreducible factor: {factor}")]
    NonRationalBasePoint { factor: String },
    #[error("system is not homaloidal: {0}")]
    NotHomaloidal(String),
    #[error("map does not preserve the pencil through p1: {0}")]
    NotDeJonquieres(String),
    #[error("quadratic factorization failed: {0}")]
    FactorizationFailed(String),
    #[error("proof step precondition violated: {0}")]
    ProofGapDetected(String),
    #[error("input word does not evaluate to the identity map")]
    NotIdentityInput,
    #[error("move budget exceeded ({spent} moves, budget {budget})")]
    BudgetExceeded { spent: u64, budget: u64 },
    #[error("decomposition stuck: {0}")]
    DecompositionStuck(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
