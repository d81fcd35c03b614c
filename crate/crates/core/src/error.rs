use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: cannot parse {text:?} as a number")]
    Parse { line: usize, text: String },

    #[error("inconsistent sample spacing at row {row}: expected {expected}, found {found}")]
    Spacing { row: usize, expected: f64, found: f64 },

    #[error("series too short: {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series is already cumulative; integrating it again is almost certainly a mistake")]
    AlreadyCumulative,

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("not enough points for a fit: {found} usable, need at least {needed}")]
    InsufficientPoints { found: usize, needed: usize },

    #[error("non-positive value {value} at tau = {tau} inside the fit range")]
    NonPositive { tau: f64, value: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for the command-line tool: 2 when the input is
    /// readable but cannot support a valid analysis, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Degenerate(_) | Error::NonPositive { .. } | Error::Quadrature { .. } => 2,
            _ => 1,
        }
    }
}
