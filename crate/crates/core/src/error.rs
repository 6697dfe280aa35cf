use thiserror::Error;

/// Errors produced by the library.
///
/// `Inconclusive` is not a failure of the arithmetic: it marks a certification
/// step that could not decide a sign within its refinement budget.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("value outside the function domain: {0}")]
    Domain(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("series truncation too small: term ratio {ratio} is not below 1")]
    TruncationTooSmall { ratio: String },
    #[error("sign bracket check failed: {0}")]
    Bracket(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("could not parse {0:?}")]
    Parse(String),
    #[error("certificate validation failed: {0}")]
    Validation(String),
    #[error("certificate schema error: {0}")]
    Schema(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
