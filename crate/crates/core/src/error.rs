use thiserror::Error;

/// Errors raised by channel construction, region algebra and rate evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("missing term {0}")]
    MissingTerm(&'static str),

    #[error("region is unbounded")]
    Unbounded,

    #[error("malformed inequality system: {0}")]
    Malformed(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
