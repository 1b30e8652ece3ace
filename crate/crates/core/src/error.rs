use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("text is already framed")]
    AlreadyFramed,

    #[error("text is not framed")]
    NotFramed,

    #[error("alphabet too large: {0} distinct symbols (at most 254 supported)")]
    AlphabetTooLarge(usize),

    #[error("symbol {0:?} is not part of the alphabet")]
    UnknownSymbol(u8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid terminator: {0}")]
    InvalidTerminator(String),

    #[error("corrupt data: {0}")]
    Corrupt(String),

    #[error("graph is not a Wheeler graph: {0}")]
    NotWheeler(String),

    #[error("invalid tunnel plan: {0}")]
    InvalidPlan(String),

    #[error("inconsistent parse and dictionary: {0}")]
    Inconsistent(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::Corrupt(msg.into())
    }

    /// Tags an error with the pipeline stage it came from.
    pub fn in_stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            source: Box::new(e),
        }
    }
}
