//! Library side of the `cqcap` binary: JSON schemas, report formatting, and
//! the command implementations, kept importable so the integration tests can
//! exercise the file formats directly.

pub mod commands;
pub mod report;
pub mod schema;

/// Errors at the CLI boundary, each with a stable exit code:
/// 2 parse, 3 dimension, 4 domain/validation, 5 guard, 6 commutativity.
#[derive(Debug)]
pub enum CliError {
    /// Malformed JSON (includes line/column from the parser).
    Parse(String),
    /// Files parsed but shapes disagree.
    Dimension(String),
    /// Values outside their domain, or states failing validation.
    Validation(String),
    /// A materialization / enumeration guard was exceeded.
    Guard(String),
    /// A commuting channel was required.
    NonCommuting(String),
    /// I/O problems.
    Io(String),
    /// Anything else (numerical failure).
    Other(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m)
            | CliError::Dimension(m)
            | CliError::Validation(m)
            | CliError::Guard(m)
            | CliError::NonCommuting(m)
            | CliError::Io(m)
            | CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Dimension(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Guard(_) => 5,
            CliError::NonCommuting(_) => 6,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<cqcap::Error> for CliError {
    fn from(err: cqcap::Error) -> Self {
        use cqcap::Error::*;
        match err {
            DimensionMismatch(..) | SizeMismatch(..) | BadShape { .. } => {
                CliError::Dimension(err.to_string())
            }
            GuardExceeded { .. } => CliError::Guard(err.to_string()),
            NonCommuting(_) => CliError::NonCommuting(err.to_string()),
            Domain(_) | TraceNotOne(_) | NotPsd(_) | UnknownLabel(_) | InvalidChannel(_)
            | EmptyInput(_) => CliError::Validation(err.to_string()),
            EigenNonConvergence { .. } => CliError::Other(err.to_string()),
        }
    }
}
