use crate::moncat::ObjectWord;

/// Errors raised by the diagram engine and the concrete models.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("signature error: {0}")]
    Signature(String),

    #[error("typing error at slice {index}: `{gen}` at offset {offset} does not fit the word {word}")]
    IllTypedSlice {
        index: usize,
        gen: String,
        offset: usize,
        word: ObjectWord,
    },

    #[error("boundary mismatch: {left} vs {right}")]
    BoundaryMismatch { left: ObjectWord, right: ObjectWord },

    #[error("slices {0} and {} are dependent and cannot be swapped", .0 + 1)]
    NotSwappable(usize),

    #[error("slice index {index} out of range for a diagram with {len} slices")]
    SliceIndex { index: usize, len: usize },

    #[error("linearization budget exceeded: at least {lower_bound} linearizations (cap {cap})")]
    LinearizationBudget { lower_bound: usize, cap: usize },

    #[error("invalid match: {0}")]
    MatchInvalid(String),

    #[error("size bound exceeded: {0}")]
    Size(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("proof search failed: {0}")]
    ProofNotFound(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
