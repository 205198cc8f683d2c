use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An index went past what a stem or matrix materializes.
    OutOfRange {
        index: usize,
        limit: usize,
    },
    /// The approximation is not below any approximation of the stem.
    NotInSpace(String),
    /// `[a, A]` is empty inside the truncation.
    EmptyNeighborhood {
        base: String,
        stem: String,
    },
    /// Operands belong to incompatible spaces or fields.
    SpaceMismatch(String),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A bounded computation would exceed its ceiling.
    CeilingExceeded {
        estimate: u128,
        ceiling: u128,
    },
    /// A fusion step produced nothing usable at this level.
    FusionExhausted {
        level: usize,
    },
    Parse(String),
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { index, limit } => {
                write!(f, "index {index} out of range (limit {limit})")
            }
            Error::NotInSpace(a) => write!(f, "{a} is not an approximation of the stem"),
            Error::EmptyNeighborhood { base, stem } => {
                write!(f, "neighborhood [{base}, {stem}] is empty")
            }
            Error::SpaceMismatch(msg) => write!(f, "space mismatch: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::CeilingExceeded { estimate, ceiling } => {
                write!(f, "refusing: estimated {estimate} instances exceeds ceiling {ceiling}")
            }
            Error::FusionExhausted { level } => write!(f, "fusion exhausted at level {level}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
