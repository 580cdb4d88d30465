use thiserror::Error;

/// Broad failure classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: {0}")]
    SeriesTooShort(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("invalid moving-average window {window}: {reason}")]
    InvalidWindow { window: usize, reason: &'static str },

    #[error("disjoint domains: {0}")]
    DisjointDomains(String),

    #[error("insufficient history: first computable year is {first_computable}")]
    InsufficientHistory { first_computable: i32 },

    #[error("uncovered years: {0}")]
    UncoveredYears(String),

    #[error("segment is not generalized")]
    NotGeneralized,

    #[error("unknown country '{name}'; available: {available}")]
    UnknownCountry { name: String, available: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate regressor: {0}")]
    DegenerateRegressor(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("missing year {0} inside the series")]
    MissingYear(i32),

    #[error("{0}")]
    Manifest(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidWindow { .. }
            | Error::InvalidConfig(_)
            | Error::UnknownCountry { .. } => ErrorKind::Usage,
            Error::DegenerateRegressor(_) | Error::Numerical(_) => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
