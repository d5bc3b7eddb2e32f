use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RbError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("overflow: d^k = {d}^{k} does not fit in 63 bits")]
    Overflow { d: u64, k: u32 },

    #[error("degenerate parameter {name}: {reason}")]
    Degenerate { name: &'static str, reason: String },

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invariant violation on line {line}: {reason}")]
    Invariant { line: usize, reason: String },

    #[error("regime error: neither threshold theorem's conditions hold (alpha > 1/k with k >= 1/(1-p) or k*exp(-alpha/r) >= 1)")]
    Regime,

    #[error("no bracket: the moment ratio stays below {level} over the scanned range")]
    NoBracket { level: f64 },

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity { what: &'static str, needed: u128, limit: u128 },

    #[error("range error: {0}")]
    Range(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RbError {
    fn from(e: std::io::Error) -> Self {
        RbError::Io(e.to_string())
    }
}

impl From<csv::Error> for RbError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            return RbError::Io(e.to_string());
        }
        let line = e.position().map_or(0, |p| p.line() as usize);
        RbError::Parse { line, reason: e.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, RbError>;

impl RbError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        RbError::InvalidParam { name, reason: reason.into() }
    }

    /// True for errors caused by the filesystem rather than the computation.
    pub fn is_io(&self) -> bool {
        matches!(self, RbError::Io(_))
    }
}
