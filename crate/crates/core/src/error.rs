use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arity {arity} exceeds the cap of {cap}")]
    ArityCap { arity: usize, cap: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("coordinate {index} out of range for arity {arity}")]
    CoordinateOutOfRange { index: usize, arity: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function is not monotone")]
    NotMonotone,

    #[error("function has no representation of degree {degree} in {mode} mode")]
    NotRepresentable { degree: usize, mode: &'static str },

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("signature mismatch")]
    SignatureMismatch,

    #[error("template witness is not a homomorphism")]
    InvalidWitness,

    #[error("slice is not closed: a minor of member {member} falls outside the slice")]
    SliceNotClosed { member: usize },

    #[error("choice table has no entry for slice member {0}")]
    MissingChoice(usize),

    #[error("search space too large: {size} exceeds {cap}")]
    SizeCap { size: u128, cap: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}
