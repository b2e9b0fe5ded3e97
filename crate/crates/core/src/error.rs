use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: cannot parse {content:?} as a zero ordinate")]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("{0}: no zeros")]
    NoZeros(PathBuf),

    #[error("zero table not monotone at index {index}: {value} follows {previous}")]
    NotMonotone {
        index: usize,
        previous: f64,
        value: f64,
    },

    #[error("zero table not positive at index {index}: {value}")]
    NotPositive { index: usize, value: f64 },

    #[error("height {requested} exceeds table coverage {max_height}")]
    HeightExceeded { requested: f64, max_height: f64 },

    #[error("index {index} outside zero table of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("prime sieve limit {limit} below required {required}")]
    SieveTooSmall { limit: u64, required: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("degenerate variance in {0}")]
    DegenerateVariance(&'static str),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
