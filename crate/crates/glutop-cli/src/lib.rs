//! IO, file formats, and command implementations for the `glutop` binary.

pub mod dot;
pub mod run;
pub mod schema;
pub mod suite;

use std::fmt;

/// Caps and reproducibility knobs shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub candidate_cap: usize,
    pub word_cap: usize,
    pub homset_cap: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            candidate_cap: glutop_core::DEFAULT_CAP,
            word_cap: glutop_core::DEFAULT_WORD_CAP,
            homset_cap: glutop_core::DEFAULT_HOMSET_CAP,
            seed: 1,
            format: OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
    Summary,
}

/// Process exit codes: 0 success, 1 validation/suite failure, 2 parse
/// error, 3 resource budget exceeded.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Budget(String),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Internal(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<glutop_core::Error> for CliError {
    fn from(e: glutop_core::Error) -> Self {
        use glutop_core::Error as E;
        match e {
            E::ExplosionLimit { .. } | E::SaturationBudgetExceeded { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
