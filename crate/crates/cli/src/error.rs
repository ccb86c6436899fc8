use std::path::PathBuf;

use ddbar_core::CoreError;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("CSV export failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Serialize)]
struct Failure<'a> {
    kind: &'a str,
    reason: String,
}

impl CliError {
    /// Under-resolution is a failed check; everything else is bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::UnderResolved { .. }) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Read { .. } => "unreadable_input",
            CliError::Write { .. } | CliError::Csv(_) => "unwritable_output",
            CliError::Json { .. } => "malformed_json",
            CliError::Core(CoreError::UnderResolved { .. }) => "under_resolved",
            CliError::Core(_) => "invalid_input",
        }
    }

    pub fn to_json(&self) -> String {
        let f = Failure { kind: self.kind(), reason: self.to_string() };
        serde_json::to_string(&f).unwrap_or_else(|_| format!("{{\"reason\":{:?}}}", self.to_string()))
    }
}
