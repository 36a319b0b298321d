use std::fmt;

use resnet_core::Error;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments (exit 1).
    Usage(String),
    /// Unreadable or invalid input graph (exit 2).
    Validation(String),
    /// Solver failure or failed identity check (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnknownVertex(_) | Error::InvalidParameter(_) | Error::Unsupported(_) | Error::SizeCapExceeded { .. } => {
                CliError::Usage(msg)
            }
            Error::InvalidGraph(_)
            | Error::DimensionMismatch { .. }
            | Error::NotAdjacent { .. }
            | Error::LevelUnderflow { .. }
            | Error::NoFrontier => CliError::Validation(msg),
            Error::NotConverged { .. }
            | Error::SeriesNotConverged { .. }
            | Error::Degenerate(_)
            | Error::NotHarmonic { .. }
            | Error::ZeroDenominator => CliError::Numerical(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
