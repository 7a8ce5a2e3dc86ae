use thiserror::Error;

use crate::matchdist::DistanceReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("label order violated: row {row} label {row_label} is not <= column {col} label {col_label}")]
    LabelOrder {
        row: usize,
        col: usize,
        row_label: String,
        col_label: String,
    },

    #[error("coefficient {value} is outside the field F_{q}")]
    Coefficient { value: i64, q: u32 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("expected {expected}-parameter input, got {found}")]
    ParamCount { expected: usize, found: usize },

    #[error("grade has {found} coordinates, expected {expected}")]
    GradeArity { expected: usize, found: usize },

    #[error("presentations do not share an underlying matrix: {0}")]
    MatrixMismatch(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("instance too large for exhaustive search ({size} bars, limit {limit})")]
    TooLarge { size: usize, limit: usize },

    #[error("not an admissible direction: {0}")]
    InvalidLine(String),

    #[error("grades are not monotone: cell {cell} has face {face} with a larger or incomparable grade")]
    NotMonotone { cell: usize, face: usize },

    #[error("boundary of boundary is nonzero at cell {0}")]
    BoundarySquare(usize),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("s must be <= t in the rank invariant")]
    NotComparable,

    #[error("chain endpoints do not present the same module: {0}")]
    ChainMismatch(String),

    #[error("no pairing exists: {0}")]
    NoPairing(String),

    #[error("subdivision depth limit reached before the bounds met (lower {:.6}, upper {:.6})", .0.lower, .0.upper)]
    MaxDepth(Box<DistanceReport>),

    #[error("invalid argument: {0}")]
    Invalid(String),
}
