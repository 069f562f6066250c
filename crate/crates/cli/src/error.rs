use std::fmt;

use bosent_core::Error as CoreError;

/// CLI failure carrying its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed input or arguments (exit 2).
    Parse(String),
    /// A mode capacity would be exceeded (exit 3).
    Capacity(String),
    /// Reading or writing a file failed (exit 4).
    Io(String),
    /// An uncertainty inequality was violated (exit 5).
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Io(_) => 4,
            CliError::Violation(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "invalid input: {m}"),
            CliError::Capacity(m) => write!(f, "capacity exceeded: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Violation(m) => write!(f, "inequality violated: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else {
            CliError::Parse(e.to_string())
        }
    }
}
