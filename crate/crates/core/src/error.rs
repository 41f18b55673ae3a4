use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// The split between [`Error::Structural`] and the numeric residuals reported
/// by validation is deliberate: a residual is a measurement, a structural
/// error means the inputs do not even describe the object they claim to.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("amplitude leaves the region at cell {cell:?} (lost norm {lost:.3e}); enlarge the region or use torus mode")]
    BoundaryLeak { cell: Vec<i64>, lost: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
