//! Front-end failures, split by exit code.
//!
//! The contract: 0 success, 1 usage (malformed flag or file values),
//! 2 precondition (well-formed values the library rejects), 3 reserved
//! for verification failures, which are not errors and are handled at the
//! call site. Every failure prints a single machine-readable JSON record
//! to stderr naming the offending field.

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// A value that could not be read at all.
    Parse { field: &'static str, message: String },
    /// A readable value the domain layer refuses.
    Precondition { field: &'static str, message: String },
}

impl CliError {
    pub fn parse(field: &'static str, message: impl Into<String>) -> CliError {
        CliError::Parse { field, message: message.into() }
    }

    pub fn precondition(field: &'static str, message: impl Into<String>) -> CliError {
        CliError::Precondition { field, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 1,
            CliError::Precondition { .. } => 2,
        }
    }

    /// One JSON line for stderr: {"error", "field", "message"}.
    pub fn machine_record(&self) -> String {
        let (kind, field, message) = match self {
            CliError::Parse { field, message } => ("parse", field, message),
            CliError::Precondition { field, message } => ("precondition", field, message),
        };
        json!({ "error": kind, "field": field, "message": message }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { field, message } => write!(f, "{field}: {message}"),
            CliError::Precondition { field, message } => write!(f, "{field}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}
