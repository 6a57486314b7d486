use thiserror::Error;

/// Process exit statuses.
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Invalid model or a domain error during evaluation.
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<fgm_core::Error> for CliError {
    fn from(e: fgm_core::Error) -> Self {
        match e {
            fgm_core::Error::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
