use alloc::string::String;

use crate::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("order 2^{log_order} exceeds the configured maximum order {max_order}")]
    OrderTooLarge { log_order: u32, max_order: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is empty")]
    Empty,

    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry ({row}, {col}) = {value} is not +1 or -1")]
    NotSign { row: usize, col: usize, value: i64 },

    #[error("entry magnitude {0} exceeds the supported bound 2^20")]
    EntryOutOfRange(i64),

    #[error("matrix of order {0} is not a Hadamard matrix")]
    NotHadamard(usize),

    #[error("first row of the Hadamard matrix is not all +1 (column {0})")]
    NotNormalized(usize),

    #[error("scale_sq must be positive, got {0}")]
    NonPositiveScale(Rational),

    #[error("column {column} has squared norm {norm_sq} under the scale, expected 1")]
    NonUnitNorm { column: usize, norm_sq: Rational },

    #[error("vectors span a {rank}-dimensional space, expected {ambient}")]
    RankDeficient { rank: usize, ambient: usize },

    #[error("need at least two vectors, got {0}")]
    TooFewVectors(usize),

    #[error("need at least two subspaces, got {0}")]
    TooFewSubspaces(usize),

    #[error(
        "Welch bound needs count >= dimension >= 1 and count >= 2 (count {count}, dimension {dim})"
    )]
    WelchDomain { count: usize, dim: usize },

    #[error("columns {first} and {second} have inner product {inner} under the scale")]
    NonOrthonormal {
        first: usize,
        second: usize,
        inner: Rational,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame is not tight")]
    NotTight,

    #[error("fusion frame parameters need n > m >= 0, got n = {n}, m = {m}")]
    GffDomain { n: u32, m: u32 },

    #[error("fusion frame has no subspaces")]
    NoSubspaces,

    #[error("{0}")]
    Invalid(String),
}
