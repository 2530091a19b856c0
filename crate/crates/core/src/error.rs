use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A requested size exceeds a memory guard or an enumeration cap.
    #[error("{0}")]
    Size(String),

    /// Matrix dimensions are incompatible with the operation.
    #[error("{0}")]
    Shape(String),

    /// Input data is malformed (non-finite entries, bad parameters, parse failures).
    #[error("{0}")]
    Data(String),

    #[error("{0}")]
    Optimizer(String),

    /// A Monte Carlo trial failed; carries the trial index.
    #[error("trial {index}: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    /// Short machine-greppable category used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Size(_) => "size",
            Error::Shape(_) => "shape",
            Error::Data(_) => "data",
            Error::Optimizer(_) => "optimizer",
            Error::Trial { source, .. } => source.kind(),
            Error::Io { .. } => "io",
        }
    }
}
