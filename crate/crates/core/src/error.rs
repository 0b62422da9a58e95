use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),

    #[error("site has dimension {found}, lattice has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("invalid cut-tree: {0}")]
    InvalidCutTree(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series coefficients are available up to order 5, requested {0}")]
    OrderUnavailable(usize),

    #[error("cache conflict for {key}: stored {stored}, computed {computed}")]
    CacheConflict {
        key: String,
        stored: String,
        computed: String,
    },

    #[error("malformed cache line {line}: {content:?}")]
    CacheFormat { line: usize, content: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
