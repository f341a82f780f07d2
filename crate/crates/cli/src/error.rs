use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },

    #[error("{field}: {source}")]
    Polynomial { field: String, source: ncstar_core::Error },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Engine(#[from] ncstar_core::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}
