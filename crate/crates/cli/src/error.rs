use thiserror::Error;

/// Failures, grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl From<reprokit::Error> for CliError {
    fn from(e: reprokit::Error) -> Self {
        use reprokit::Error as E;
        match e {
            E::Parse(_) | E::InvalidArgument(_) => CliError::Input(e.to_string()),
            _ => CliError::Mismatch(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
