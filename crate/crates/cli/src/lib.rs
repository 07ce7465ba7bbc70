//! Instance files, reports and commands for the `pontryagin` binary.

pub mod commands;
pub mod instance;
pub mod json;
pub mod sweep;

pub const SCHEMA_VERSION: &str = "1.0";

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    /// A computed value disagrees with an embedded expectation.
    Mismatch = 1,
    /// Unreadable, malformed or invalid input.
    Input = 2,
    /// An interval endpoint lies on (or too near) an eigenvalue.
    IllPosed = 3,
    /// A bound failed.
    Violation = 4,
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: ExitCode,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: ExitCode::Ok,
        }
    }

    pub fn fail(code: ExitCode, message: String) -> Self {
        Self {
            stdout: String::new(),
            stderr: message + "\n",
            code,
        }
    }
}
