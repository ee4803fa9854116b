use thiserror::Error;

/// Command failure, mapped onto the documented exit statuses.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: bad amplitude text, unreadable config, bad flag combination.
    #[error("{0}")]
    Parse(String),
    /// Input parsed but violates a protocol constraint.
    #[error("{0}")]
    Validation(String),
    /// `verify` found a violated invariant.
    #[error("{0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<iontrap_teleport::Error> for CliError {
    fn from(e: iontrap_teleport::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
