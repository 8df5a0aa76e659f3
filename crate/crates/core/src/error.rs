use thiserror::Error;

use crate::subset::SubsetMask;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected n={expected}, got n={found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("valuation is not gross substitutes: triple ({i},{j},{k}) at S={set}")]
    NotGrossSubstitutes {
        set: SubsetMask,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("valuations are not tree-concordant at S={set}: {x} crosses {y}")]
    NotConcordant {
        set: SubsetMask,
        x: SubsetMask,
        y: SubsetMask,
    },

    #[error("delta tensor violates the integrability conditions at S={set}, triple ({i},{j},{k})")]
    NotIntegrable {
        set: SubsetMask,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
