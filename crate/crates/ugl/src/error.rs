use std::path::PathBuf;

use ugl_core::ErrorKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ugl_core::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line, msg: msg.into() }
    }

    /// 3 for exceeded bounds, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if e.kind() == ErrorKind::Capability => 3,
            _ => 2,
        }
    }
}
