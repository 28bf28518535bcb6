use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("permutation length must be between 1 and {max}, got {len}")]
    InvalidLength { len: usize, max: usize },

    #[error("not a permutation of 1..{len}: {reason}")]
    NotAPermutation { len: usize, reason: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("component of length {len} has a fixed point at position {position}")]
    NotDerangement { len: usize, position: usize },

    #[error("{0} is not a single cycle")]
    NotCyclic(String),

    #[error("component {index} has length {len}, expected {index}")]
    ComponentLength { index: usize, len: usize },

    #[error("strategy needs at least {min} components, got {got}")]
    StrategyTooShort { min: usize, got: usize },

    #[error("no legal move with {incorrect} incorrect position(s)")]
    NoLegalMove { incorrect: usize },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error(
        "refused: estimated {estimate} elementary steps exceeds the threshold of {threshold}; \
         raise the threshold or pass the override to run anyway"
    )]
    Refused { estimate: u128, threshold: u128 },

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
