//! Process-level error with a stable exit code.

use std::fmt;

/// Generic failure.
pub const EXIT_OTHER: i32 = 1;
/// A required input file is missing or unreadable.
pub const EXIT_MISSING_INPUT: i32 = 2;
/// The lexicon failed to parse or validate.
pub const EXIT_INVALID_LEXICON: i32 = 3;
/// `lexicon validate` found violations.
pub const EXIT_VIOLATIONS: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn other(message: impl fmt::Display) -> Self {
        CliError::new(EXIT_OTHER, message.to_string())
    }

    pub fn missing_input(message: impl fmt::Display) -> Self {
        CliError::new(EXIT_MISSING_INPUT, message.to_string())
    }

    pub fn invalid_lexicon(message: impl fmt::Display) -> Self {
        CliError::new(EXIT_INVALID_LEXICON, message.to_string())
    }

    /// Classifies an I/O failure on an input path: not-found is a missing
    /// input, anything else a generic failure.
    pub fn from_input_io(path: &std::path::Path, e: std::io::Error) -> Self {
        let message = format!("{}: {e}", path.display());
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::missing_input(message)
        } else {
            CliError::other(message)
        }
    }

    /// Machine-parseable rendering for `--json-errors`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "code": self.code, "error": self.message }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
