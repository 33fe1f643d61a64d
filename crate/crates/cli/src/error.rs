use gabor_core::GaborError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification => 1,
            Self::Usage(_) => 2,
            Self::Domain(_) => 3,
            Self::Io(_) => 4,
        }
    }

    /// Generator errors mean a bad spec string unless the dimension is at
    /// fault, which the generator reports as a precondition.
    pub fn from_generator(e: GaborError) -> Self {
        match e {
            GaborError::InvalidGenerator(_) | GaborError::Parse(_) => Self::Usage(e.to_string()),
            other => Self::Domain(other.to_string()),
        }
    }
}

impl From<GaborError> for CliError {
    fn from(e: GaborError) -> Self {
        match e {
            GaborError::Parse(_)
            | GaborError::InvalidTransform(_)
            | GaborError::InvalidGenerator(_)
            | GaborError::InvalidTolerance(_) => Self::Usage(e.to_string()),
            other => Self::Domain(other.to_string()),
        }
    }
}
