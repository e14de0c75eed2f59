use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The source variance is zero: the value is already known exactly.
    #[error("degenerate source: distortion {0} is not positive")]
    DegenerateSource(f64),

    #[error("insufficient data: need at least {required}, found {found}")]
    InsufficientData { required: usize, found: usize },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Inputs that are individually valid but inconsistent with each other.
    #[error("input error: {0}")]
    Input(String),

    #[error("unsupported design: {0}")]
    UnsupportedDesign(String),

    #[error("format error at line {line}: {message}")]
    Format { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
