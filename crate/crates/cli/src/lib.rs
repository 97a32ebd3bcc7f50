//! File formats, command implementations and property suites for the `ts`
//! tool.

pub mod commands;
pub mod formats;
pub mod suites;

/// Failures the tool reports on the error stream with exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] truestage::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Format(String),
}
