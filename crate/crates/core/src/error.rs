use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NonSquare { rows: usize, row: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("matrix has finite order {0}; an element of infinite order is required")]
    FiniteOrder(u32),

    #[error("polynomial degree {degree} exceeds the supported cap of {cap}")]
    UnsupportedDegree { degree: usize, cap: usize },

    #[error("polynomial is not squarefree; deduplicate repeated factors before counting roots")]
    NotSquarefree,

    #[error("polynomial is reducible over the integers")]
    Reducible,

    #[error("polynomial must be monic")]
    NotMonic,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("{0} is a perfect square or non-positive")]
    PellDomain(String),

    #[error("a reversor cannot be of odd order (got {0})")]
    OddReversorOrder(u64),

    #[error("substitution is not primitive")]
    NotPrimitive,

    #[error("unknown letter {0:?}")]
    UnknownLetter(char),

    #[error("language depth {max_len} is insufficient, need at least {needed}")]
    InsufficientDepth { max_len: usize, needed: usize },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("region too small: {0}")]
    RegionTooSmall(String),

    #[error("patch must be square for this map")]
    NotSquarePatch,

    #[error("wrong alphabet: {0}")]
    Alphabet(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}
