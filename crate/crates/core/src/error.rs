use thiserror::Error;

use crate::ring::RingElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),

    #[error("invalid ring spec: {0}")]
    BadSpec(String),

    #[error("element shape does not match the ring")]
    ShapeMismatch,

    #[error("element {0} is not a unit")]
    NotAUnit(String),

    #[error("ring has no generic character")]
    NonGenericCharacter,

    #[error("construction not applicable: {0}")]
    NotApplicable(String),

    #[error("set too small: {0}")]
    TooSmall(String),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("node limit of {limit} exceeded; best clique so far has {} vertices", best.len())]
    NodeLimitExceeded { limit: u64, best: Vec<RingElement> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
