use thiserror::Error;
use w2eit::eit::EitError;
use w2eit::io::IoError;
use w2eit::OtError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable or invalid inputs.
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] IoError),
    #[error("invalid density: {0}")]
    Density(OtError),
    #[error("solver did not converge: {0}")]
    Convergence(OtError),
    #[error("solver failure: {0}")]
    Solver(EitError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) | CliError::Density(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl From<OtError> for CliError {
    fn from(e: OtError) -> Self {
        match e {
            OtError::NoConvergence { .. } => CliError::Convergence(e),
            _ => CliError::Density(e),
        }
    }
}

impl From<EitError> for CliError {
    fn from(e: EitError) -> Self {
        match e {
            EitError::Config { .. } | EitError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Solver(e),
        }
    }
}
