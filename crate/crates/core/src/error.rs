use thiserror::Error;

/// Errors raised by the optimizers, evaluators and benchmark functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation budget of {max_nfe} exhausted")]
    BudgetExhausted { max_nfe: usize },

    #[error("coordinate {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBox {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("objective has no known optimum value")]
    MissingOptimum,

    #[error("no evaluations recorded")]
    NoEvaluations,

    #[error("budget of {max_nfe} evaluations is below the {needed} required")]
    InsufficientBudget { needed: usize, max_nfe: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
