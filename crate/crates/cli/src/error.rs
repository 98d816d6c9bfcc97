use gu_core::beta::BetaError;
use gu_core::collapse::CollapseError;
use gu_core::dovetail::DovetailError;
use gu_core::machine::{MachineError, ParseError};
use gu_core::universe::UniverseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error(transparent)]
    Dovetail(#[from] DovetailError),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Collapse(#[from] CollapseError),
    #[error("{0}")]
    Verify(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// Stable identifier printed with every error.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Io { .. } => "E_IO",
            CliError::Parse { .. } => "E_PARSE",
            CliError::Machine(_) => "E_MACHINE",
            CliError::Beta(_) => "E_BETA",
            CliError::Dovetail(_) => "E_DOVETAIL",
            CliError::Universe(_) => "E_UNIVERSE",
            CliError::Collapse(_) => "E_COLLAPSE",
            CliError::Verify(_) => "E_VERIFY",
            CliError::Output(_) => "E_OUTPUT",
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
