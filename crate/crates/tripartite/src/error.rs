use std::path::PathBuf;

/// Errors of the std layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A state failed validation or a measure could not be computed.
    #[error(transparent)]
    Core(#[from] tripartite_core::Error),

    #[error("draw {draw}: {source}")]
    Draw {
        draw: u64,
        #[source]
        source: tripartite_core::Error,
    },

    #[error("cannot parse state file: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("output sink: {0}")]
    Sink(String),
}

impl Error {
    /// Process exit code: 2 usage or parse, 3 validation, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Config(_) => 2,
            Error::Core(_) | Error::Draw { .. } => 3,
            Error::Io { .. } | Error::Sink(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Sink(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
