use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("pairing undefined: {0}")]
    PairingUndefined(&'static str),

    #[error("rule `{0}` has no genericity detector")]
    NoDetector(String),

    #[error("invalid step at index {index} for rule `{rule}`")]
    InvalidStep { rule: String, index: usize },

    #[error(
        "enumeration budget exceeded: {needed_log2} bits needed, budget is {budget}; \
         largest feasible r is {feasible_max_r}"
    )]
    BudgetExceeded {
        needed_log2: u32,
        budget: u64,
        feasible_max_r: usize,
    },

    #[error("distance at index {0} is not positive")]
    NonPositiveDistance(usize),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid rule `{0}`")]
    InvalidRule(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
