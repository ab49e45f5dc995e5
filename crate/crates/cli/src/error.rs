use std::process::ExitCode;

use dirichlet::Error;

/// Command failure, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable inputs or inputs outside an operation's domain.
    #[error("{0}")]
    Usage(String),
    /// A verification suite found counterexamples.
    #[error("{0} property check(s) failed")]
    Property(usize),
    /// Overflow, exhausted budgets, unresolved orbits and non-finite values.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Property(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::ModeMismatch { .. }
            | Error::NotInvertible
            | Error::Parse(_) => CliError::Usage(e.to_string()),
            Error::TableTooSmall(_)
            | Error::Overflow(_)
            | Error::OverflowWindow { .. }
            | Error::BudgetExceeded { .. }
            | Error::UnresolvedOrbit { .. }
            | Error::GroupTooLarge { .. }
            | Error::NumericFailure(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("invalid JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
