use thiserror::Error;

use crate::construction::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("word length must be a power of two between 4 and 64, got {0}")]
    InvalidLength(u32),
    #[error("word length {0} exceeds 64 bits")]
    WordTooLong(u32),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: u32, right: u32 },
    #[error("level {t} out of range 1..={max}")]
    LevelOutOfRange { t: u32, max: u32 },
    #[error("word {0} has odd parity")]
    OddWord(String),
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("malformed representative: {0}")]
    MalformedRep(String),
    #[error("isometry is not in the level-{t} group")]
    NotInGroup { t: u32 },
    #[error("collection index set is not a linear subspace")]
    NotSubspace,
    #[error("set is not a component of order {t}")]
    NotComponent { t: u32 },
    #[error("shift word is not supported on the first {width} coordinates")]
    ShiftSupport { width: u32 },
    #[error("enumeration of {size} items exceeds the budget of {budget}")]
    BudgetExceeded { size: String, budget: u64 },
    #[error("operation not supported: {0}")]
    Unsupported(String),
    #[error("invalid assignment tree: {0}")]
    InvalidTree(Violation),
    #[error("no nondegenerate collection found after {attempts} attempts at level {t}")]
    RejectionCapExceeded { t: u32, attempts: u32 },
    #[error("input is not an extended 1-perfect code")]
    NotExtendedPerfect,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
