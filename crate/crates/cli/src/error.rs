use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad config, missing input, or a stage run out of order.
    #[error("{0}")]
    Config(String),
    /// Inputs that exist but do not pass validation.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Data(_) => ExitCode::from(3),
        }
    }

    pub fn data(e: impl std::fmt::Display) -> Self {
        CliError::Data(e.to_string())
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Config(format!("{}: {e}", path.display()))
    }
}
