use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("distance must be an odd integer >= 3, got {0}")]
    InvalidDistance(usize),

    #[error("distance {distance} exceeds the supported maximum {max} for {what}")]
    DistanceTooLarge {
        distance: usize,
        max: usize,
        what: &'static str,
    },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("rounds must be >= 1")]
    InvalidRounds,

    #[error("circuit already carries noise channels")]
    AlreadyNoisy,

    #[error("probability {0} outside the supported range")]
    InvalidProbability(f64),

    #[error("circuit has {qubits} qubits, reference simulator supports at most {max}")]
    CircuitTooLarge { qubits: usize, max: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("syndrome length {got} does not match detector count {expected}")]
    SyndromeLength { got: usize, expected: usize },

    #[error("no fault set reproduces the syndrome")]
    NoSolution,

    #[error("no fault set of weight <= {0} reproduces the syndrome")]
    NotFoundWithin(usize),

    #[error("{0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
