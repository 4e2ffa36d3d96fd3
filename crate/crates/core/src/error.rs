use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{origin}:{location}: {message}")]
    Parse {
        origin: String,
        /// 1-based line number for text inputs, byte offset for binary ones.
        location: String,
        message: String,
    },

    #[error("duplicate token {token:?} at {location}")]
    DuplicateToken { token: String, location: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("candidate index is empty ({discarded} terms discarded as out of vocabulary)")]
    EmptyIndex { discarded: usize },

    #[error("every candidate is excluded from the ranking")]
    AllExcluded,

    #[error("invalid analogy record: {0}")]
    InvalidRecord(String),

    #[error("duplicate subject {subject:?} in relation {relation:?}")]
    DuplicateSubject { relation: String, subject: String },

    #[error("relation {relation:?} has {found} distinct subjects, {required} required")]
    NotEnoughSubjects {
        relation: String,
        found: usize,
        required: usize,
    },

    #[error("no relations selected")]
    NoRelations,

    #[error("relation {0:?} has no queries")]
    EmptyRelation(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: impl Into<String>, location: impl ToString, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.into(),
            location: location.to_string(),
            message: message.into(),
        }
    }
}
