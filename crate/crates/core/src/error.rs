use std::path::PathBuf;

/// Errors returned by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Test and reference series share no timestamp.
    #[error("no overlap between test and reference timestamps")]
    NoOverlap,
    /// An operation received an empty input where at least one value is required.
    #[error("empty input: {0}")]
    Empty(&'static str),
    /// A series or array was too short for the requested operation.
    #[error("{what}: need at least {needed} points, got {got}")]
    TooShort {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    /// Two arrays that must match in length do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    /// A type invariant was violated on construction.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },
    /// File-backed clear-sky table has no value at the requested instant.
    #[error("no clear-sky value at timestamp {0}")]
    NoClearSkyValue(i64),
    /// Forecast skill requested against a reference with zero error.
    #[error("degenerate reference: reference error is zero")]
    DegenerateReference,
    /// Integration interval of zero (or negative) length.
    #[error("zero-length interval [{0}, {1}]")]
    ZeroLengthInterval(i64, i64),
    /// A slope function does not cover the requested interval.
    #[error("slope function does not cover [{0}, {1}]")]
    NotCovered(i64, i64),
    /// A CSV row failed validation.
    #[error("{path}:{line}: {reason}")]
    Row {
        path: String,
        line: u64,
        reason: String,
    },
    /// Two records share a timestamp.
    #[error("{path}:{line}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp {
        path: String,
        line: u64,
        timestamp: String,
    },
    /// Not enough candidates to satisfy a requested sample or sequence count.
    #[error("{what}: requested {requested}, only {available} available")]
    Shortfall {
        what: String,
        requested: usize,
        available: usize,
    },
    /// A feature window is missing a lagged input or its target.
    #[error("incomplete window at timestamp {0}")]
    IncompleteWindow(i64),
    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {0} (non-finite loss)")]
    Diverged(usize),
    /// Raw frame file could not be parsed.
    #[error("bad frame file {path}: {reason}")]
    Frame { path: PathBuf, reason: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
