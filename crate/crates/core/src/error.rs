use std::path::PathBuf;

use crate::citation_graph::ThresholdPair;

/// Errors raised by ingestion, analysis and reporting.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record starting at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("corpus cache line {line}: {reason}")]
    Cache { line: usize, reason: String },

    #[error("no record survives the year filter {min}:{max}")]
    EmptyCorpus { min: i32, max: i32 },

    #[error("core sets were computed under different thresholds ({left} vs {right})")]
    ThresholdMismatch {
        left: ThresholdPair,
        right: ThresholdPair,
    },

    #[error("gap {gap} does not fit the year range {min}:{max}")]
    GapTooLarge { gap: u32, min: i32, max: i32 },

    #[error("every RSI point of series {thresholds} (gap {gap}) is undefined")]
    NoDefinedPoints { thresholds: ThresholdPair, gap: u32 },

    #[error("RSI series do not share gap and year coverage")]
    SeriesMismatch,

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
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
