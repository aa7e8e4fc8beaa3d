use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed row {line} in {path}: {reason}")]
    MalformedRow { path: PathBuf, line: usize, reason: String },

    #[error("non-positive price {price} on {date}")]
    NonPositivePrice { date: String, price: f64 },

    #[error("duplicate date {0}")]
    DuplicateDate(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("no price files found in {0}")]
    EmptyUniverse(PathBuf),

    #[error("series lengths differ: {0}")]
    UnequalLengths(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("series too short: need at least {needed} days, have {actual}")]
    SeriesTooShort { needed: usize, actual: usize },

    #[error("scaling fit needs at least 2 positive counts, got {0}")]
    TooFewPoints(usize),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
