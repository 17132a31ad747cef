use std::fmt;

use aquameter_core::CoreError;

/// One rejected row: line number in the source file plus the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub line: u64,
    pub message: String,
}

/// Every validation failure found in one input, reported together so a bad
/// file surfaces all of its problems in a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub source: String,
    pub issues: Vec<Issue>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} invalid row(s)",
            self.source,
            self.issues.len()
        )?;
        for issue in &self.issues {
            writeln!(f, "  line {}: {}", issue.line, issue.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{file}: {inner}")]
    Io {
        file: String,
        inner: std::io::Error,
    },

    #[error("{file}: {inner}")]
    Csv { file: String, inner: csv::Error },

    #[error("{0}")]
    Validation(ValidationReport),

    #[error("{file}: missing required column {column:?}")]
    MissingColumn { file: String, column: String },

    #[error("{file}: unknown column {column:?}")]
    UnknownColumn { file: String, column: String },

    #[error("{file}: expected exactly one of columns [{expected}], found [{found}]")]
    ColumnChoice {
        file: String,
        expected: String,
        found: String,
    },

    #[error("config {file}, line {line}: {message}")]
    Config {
        file: String,
        line: u64,
        message: String,
    },

    #[error("{context}: {inner}")]
    Json {
        context: String,
        inner: serde_json::Error,
    },

    /// Missing or inconsistent run inputs (wrong flags, absent tables).
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub(crate) fn io(file: &str, inner: std::io::Error) -> Self {
        Error::Io {
            file: file.into(),
            inner,
        }
    }
}
