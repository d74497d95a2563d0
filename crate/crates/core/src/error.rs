use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parity violation: d - ell = {d} - {ell} must be a non-negative even integer")]
    Parity { d: usize, ell: usize },

    #[error("invalid chart index {chart} for {vars} variables")]
    InvalidChart { chart: usize, vars: usize },

    #[error("point is not on the unit sphere (norm {norm})")]
    Normalization { norm: f64 },

    #[error("precision loss: {0}")]
    Precision(String),

    #[error("suspected singular curve: {0}")]
    Singular(String),

    #[error("near-tangency: {0}")]
    NearTangency(String),

    #[error("non-generic direction: {0}")]
    NonGenericDirection(String),

    #[error("optimization failure: {0}")]
    Optimization(String),

    #[error("resultant vanishes identically: the inputs share a common component")]
    CommonComponent,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),

    #[error("invalid parameter '{key}': {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
