use thiserror::Error;

/// Errors raised by matrix operations and the analyses built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("{op}: dimension mismatch ({}x{} vs {}x{})", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: matrix is {rows}x{cols}, expected square")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is not primitive")]
    NotPrimitive,

    #[error("digraph has no directed cycle")]
    Acyclic,

    #[error("zero matrix has no rank factorization")]
    ZeroMatrix,

    #[error("boolean rank unknown: {0}")]
    RankUnknown(crate::boolrank::UnknownReason),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iteration ran past a proven bound; this indicates a bug, not bad input.
    #[error("internal guard exceeded: {0}")]
    GuardExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
