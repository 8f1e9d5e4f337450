use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("admissibility error: {0}")]
    Admissibility(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("plat error: {0}")]
    Plat(String),
    #[error("not plat compatible: {0}")]
    NotPlatCompatible(String),
    #[error("odd crossing parity between components {0} and {1}")]
    OddCrossingParity(usize, usize),
    #[error("label not found in basis")]
    NotFound,
    #[error("index {0} out of range for basis of dimension {1}")]
    OutOfRange(usize, usize),
    #[error("value {value} does not fit a {width}-bit register slot")]
    Width { value: u32, width: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    /// True for size-limit failures rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
