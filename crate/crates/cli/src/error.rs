use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed rows; `lines` are 1-based line numbers in the input.
    #[error("{message}")]
    Parse { lines: Vec<u64>, message: String },
    #[error("dataset has {rows} data rows, at least 2 are required")]
    EmptyDataset { rows: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Selection(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Stat(#[from] xidep::Error),
}

impl CliError {
    /// Stable name used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::EmptyDataset { .. } => "EmptyDataset",
            CliError::Io { .. } => "IoError",
            CliError::Selection(_) => "SelectionError",
            CliError::Usage(_) => "UsageError",
            CliError::Stat(e) => e.kind(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
