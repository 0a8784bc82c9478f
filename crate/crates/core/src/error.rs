use thiserror::Error;

pub type Result<T, E = TropError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry {value} exceeds the magnitude cap of {cap}")]
    EntryOutOfRange { value: i128, cap: i64 },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operation requires {expected}, got a {rows}x{cols} matrix")]
    WrongShape {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid row cover: {0}")]
    InvalidCover(String),
    #[error("oracle search space of {points} points exceeds the budget of {budget}")]
    OracleBudget { points: u128, budget: u128 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("internal error: {0}")]
    Internal(String),
}
