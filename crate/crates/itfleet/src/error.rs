use std::path::{Path, PathBuf};

/// Failures of the file-based front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] itfleet_core::Error),
    /// A malformed data row; `row` counts data rows from 1.
    #[error("{file}: row {row}: {message}")]
    Row { file: String, row: usize, message: String },
    /// A structured document that does not match its schema.
    #[error("{file}: {message}")]
    Document { file: String, message: String },
    /// Any other invalid input or flag.
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            Error::Io { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        }
    }

    pub(crate) fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::Io { path: path.to_path_buf(), source }
    }
}
