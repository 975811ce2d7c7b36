use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive (got {rows}x{cols})")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cannot build a full-row-rank {k}x{n} matrix with k > n")]
    RankImpossible { k: usize, n: usize },

    #[error("permutation matrices must be square (got {k}x{n})")]
    NonSquarePermutation { k: usize, n: usize },

    #[error("hiding key must contain at least one byte")]
    EmptyKey,

    #[error("syndrome system has no solution (rank deficient parity-check matrix)")]
    Infeasible,

    #[error("exhaustive coset search limited to n <= {max} columns (got {n})")]
    MinimizeTooLarge { n: usize, max: usize },

    #[error("payload of {k} bits exceeds cover capacity of {capacity} bits")]
    CapacityExceeded { k: usize, capacity: usize },

    #[error("payload must contain at least one bit")]
    EmptyPayload,

    #[error("outer product would need {needed}x{needed} bits; cap is {cap}")]
    OuterCapExceeded { needed: usize, cap: usize },

    #[error("expected a {expected} result, found {found}")]
    WrongCase {
        expected: &'static str,
        found: &'static str,
    },

    #[error("PGM: {0}")]
    Pgm(String),

    #[error("result container: {0}")]
    Container(String),

    #[error("image too small for feature extraction: {width}x{height}")]
    ImageTooSmall { width: usize, height: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("modulus must be at least 2")]
    BadModulus,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
