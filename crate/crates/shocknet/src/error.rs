use std::io;
use std::path::PathBuf;

/// Errors surfaced by file handling and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}", format_location(source_name, *line, message))]
    Parse { source_name: String, line: Option<usize>, message: String },
    #[error(transparent)]
    Core(#[from] shocknet_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn format_location(source: &str, line: Option<usize>, message: &str) -> String {
    match line {
        Some(line) => format!("{source}:{line}: {message}"),
        None => format!("{source}: {message}"),
    }
}

impl Error {
    pub(crate) fn parse(source_name: impl Into<String>, line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Parse { source_name: source_name.into(), line, message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code: 2 for numeric failures (limits, mismatches), 1 for
    /// everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Core(e) if e.is_numeric() => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
