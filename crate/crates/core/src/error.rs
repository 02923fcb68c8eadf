use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map one-to-one onto the precondition violations of the public
/// operations, so callers (the CLI in particular) can match on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("size {n} exceeds the {engine} guard of {limit}")]
    TooLarge {
        engine: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("entry ({row}, {col}) is zero; negative Hadamard powers need nonzero entries")]
    ZeroEntry { row: usize, col: usize },

    #[error("bad index set: {0}")]
    BadIndexSet(String),

    #[error("matrix has rank {rank}, expected rank at most 2")]
    RankTooHigh { rank: usize },

    #[error("det of the (n-1)-th Hadamard power is zero; permanent not recoverable")]
    DegenerateDenominator,

    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("k = {k} is outside [0, {n}]")]
    BadK { k: i64, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("no sample satisfied the {mode} constraint after {attempts} attempts")]
    ExhaustedResampling { mode: &'static str, attempts: usize },

    #[error("engines disagree at n = {n}: {detail}")]
    EngineDisagreement { n: usize, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
