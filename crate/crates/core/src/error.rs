use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),

    #[error("invalid symmetrizer: {0}")]
    InvalidSymmetrizer(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("arithmetic overflow in {0}")]
    ArithmeticOverflow(&'static str),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("column {column} of the input is not sign-coherent")]
    NotSignCoherentInput { column: usize },

    #[error("nonnegativity violated at row {row}, column {column} (entry {value})")]
    NonNegativityViolation {
        row: usize,
        column: usize,
        value: i128,
    },

    #[error("invalid split {n}|{m} of a {size}x{size} matrix")]
    InvalidSplit { n: usize, m: usize, size: usize },

    #[error("invalid input sequence: {0}")]
    InvalidInputSequence(String),

    #[error("sequence is not split-shaped: {0}")]
    ShapeViolation(String),

    #[error("size {n} exceeds the limit of {limit} for this method")]
    SizeLimit { n: usize, limit: usize },

    #[error("column {column} is neither green nor red")]
    SignUndefined { column: usize },

    #[error("internal sign violation: {0}")]
    InternalSignViolation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
