use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("hyperbolicity lost: {0}")]
    HyperbolicityLost(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("solution blew up at t = {t}")]
    BlownUp { t: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }
    pub(crate) fn hyperbolicity(msg: impl Into<String>) -> Self {
        Error::HyperbolicityLost(msg.into())
    }
}
