use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A rejected line in a run or qrels stream. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: invalid {field} {value:?}")]
    InvalidNumber {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: duplicate entry for topic {topic:?}, document {doc:?}")]
    Duplicate {
        line: usize,
        topic: String,
        doc: String,
    },
    #[error("line {line}: input is not valid UTF-8")]
    Encoding { line: usize },
    #[error("line {line}: {message}")]
    Io { line: usize, message: String },
    #[error("input contains no entries")]
    Empty,
}

impl ParseError {
    /// The offending line, if the error is tied to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::FieldCount { line, .. }
            | ParseError::InvalidNumber { line, .. }
            | ParseError::Duplicate { line, .. }
            | ParseError::Encoding { line }
            | ParseError::Io { line, .. } => Some(*line),
            ParseError::Empty => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("topic sets differ: {only_a} topic(s) only in the first input, {only_b} only in the second")]
    TopicMismatch { only_a: usize, only_b: usize },
    #[error("no shared topics between the inputs")]
    NoSharedTopics,
    #[error("no evaluable topics for {measure}")]
    NoEvaluableTopics { measure: String },
    #[error("measure names differ: {0:?} vs {1:?}")]
    MeasureMismatch(String, String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("continued fraction failed to converge for x={x}, a={a}, b={b}")]
    NoConvergence { x: f64, a: f64, b: f64 },
}
