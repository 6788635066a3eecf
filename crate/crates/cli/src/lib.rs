pub mod cache;
pub mod commands;
pub mod plot;
pub mod report;

use std::fmt;

use upsilon_core::Error;

/// A failed command together with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::usage(e.to_string())
    }
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub cache: Option<std::path::PathBuf>,
    pub no_timing: bool,
    pub json: bool,
    pub grid: usize,
}

/// What a command prints and the exit code it finishes with.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}
