use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("unstable single-server system: lambda = {lambda} must be below mu = {mu}")]
    Stability { lambda: f64, mu: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("empty or out-of-range window [{start}, {end}]")]
    EmptyWindow { start: f64, end: f64 },

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("grid point {label}: {source}")]
    GridPoint {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::ParameterDomain(msg.into())
    }

    pub(crate) fn parse(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Parse {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn at_point(self, label: impl Into<String>) -> Self {
        Error::GridPoint {
            label: label.into(),
            source: Box::new(self),
        }
    }
}
