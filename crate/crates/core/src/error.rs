use thiserror::Error;

/// Failure categories shared by every module of the crate.
///
/// The CLI maps these onto exit codes, so each variant names the class of
/// problem rather than the module it came from.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input (dimension mismatch, bad index).
    #[error("input error: {0}")]
    Input(String),

    /// A text or numeric encoding could not be decoded.
    #[error("format error: {0}")]
    Format(String),

    /// The requested computation exceeds a hard size budget.
    #[error("resource error: {0}")]
    Resource(String),

    /// A mathematical domain restriction was violated (e.g. 0^-1).
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation was called on data that has not been prepared for it.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An oracle was asked for something it does not answer.
    #[error("capability error: {0}")]
    Capability(String),

    /// Parameters outside the range where a recovery procedure is valid.
    #[error("contract error: {0}")]
    Contract(String),

    /// A recovered value could not be certified to the required accuracy.
    #[error("certification failure: {0}")]
    Certification(String),

    /// Two routes that must agree did not; indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
