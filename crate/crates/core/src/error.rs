use std::path::PathBuf;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} exceeds the table limit {limit}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("cannot allocate {requested} entries: {reason}")]
    Resource { requested: u64, reason: String },

    #[error("cache file {} is corrupt: {reason}", path.display())]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },

    #[error("config is missing required keys: {}", .0.join(", "))]
    ConfigMissing(Vec<String>),

    #[error("suite `{suite}`: {source}")]
    Suite {
        suite: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
