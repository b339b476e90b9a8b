use thiserror::Error;

/// Exit code 1: the inputs were understood but could not be processed.
pub const EXIT_PROCESSING: u8 = 1;
/// Exit code 2: bad flags, unreadable/invalid configuration or input file.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Processing(String),
}

impl CliError {
    pub fn usage(msg: impl std::fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }

    pub fn processing(msg: impl std::fmt::Display) -> Self {
        CliError::Processing(msg.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Processing(_) => EXIT_PROCESSING,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
