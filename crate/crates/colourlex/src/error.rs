//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A data file violated its format; `line` is 1-based.
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unknown colour '{0}'")]
    UnknownColour(String),

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("no votes")]
    NoVotes,

    #[error("heterogeneous group: expected votes for {expected}, found {found}")]
    HeterogeneousGroup { expected: String, found: String },

    #[error("cannot break a tie over an empty colour set")]
    EmptyTie,

    #[error("invalid sense key: '{synonym}' shares no category with '{word}'")]
    InvalidSenseKey { word: String, synonym: String },

    #[error("insufficient distractors: need {needed}, only {available} available")]
    InsufficientDistractors { needed: usize, available: usize },

    #[error("duplicate term '{0}'")]
    DuplicateTerm(String),

    #[error("no answer key for term '{0}'")]
    NoAnswerKey(String),

    #[error("no terms for label '{0}'")]
    NoTermsForLabel(String),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
