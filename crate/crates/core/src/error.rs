use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed instance data. `location` names the offending row/column.
    #[error("format error at {location}: {message}")]
    Format { location: String, message: String },

    #[error("unknown target `{0}`")]
    UnknownTarget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Whether this error stems from bad input data rather than bad arguments.
    pub fn is_format(&self) -> bool {
        matches!(
            self,
            Error::Format { .. } | Error::UnknownTarget(_) | Error::Json(_)
        )
    }
}
