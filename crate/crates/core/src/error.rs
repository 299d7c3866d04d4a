use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value outside the domain: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("layer {layer} has zero total weight")]
    DegenerateLayer { layer: usize },

    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("monte carlo estimate did not converge: {0}")]
    NonConvergence(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("alignment failed: {0}")]
    Alignment(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
