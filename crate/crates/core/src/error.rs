use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("line {line}: blank line inside label stream")]
    BlankLine { line: usize },

    #[error("label {label} out of range for {k} clusters")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("matrix is not square: {rows} rows, row of length {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("brute force assignment limited to K <= {max}, got {k}")]
    TooLargeForBruteForce { k: usize, max: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("row {row} of the vote matrix has no votes")]
    EmptyVoteRow { row: usize },

    #[error("base clusterer failed: {0}")]
    Clusterer(String),
}
