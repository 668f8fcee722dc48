use thiserror::Error;

/// Failures that end a run. Mathematical outcomes such as "no orbit" or
/// "not an ideal" are reported in the output instead.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed configuration, missing fields, unusable output path.
    #[error("config error: {0}")]
    Config(String),

    /// Inputs that parse but violate the model's constraints.
    #[error("validation error: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<eabp::Error> for CliError {
    fn from(e: eabp::Error) -> Self {
        match e {
            eabp::Error::Parse(msg) => CliError::Config(msg),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
