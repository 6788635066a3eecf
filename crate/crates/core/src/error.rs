use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter {value} outside the domain [0, 2]")]
    Domain { value: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("not a knot-like complex in scope: {0}")]
    UnsupportedComplex(String),

    #[error("t = {0} is not a singularity of the Upsilon derivative")]
    NotSingular(String),

    #[error("singularity at t = {t} has non-positive slope jump {jump}")]
    NonPositiveJump { t: String, jump: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
