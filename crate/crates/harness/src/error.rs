use std::fmt::Display;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad arguments, configuration or data files.
    #[error("{0}")]
    Input(String),
    /// A solver output violated a checked property.
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Input(_) => 1,
            HarnessError::Assertion(_) => 2,
        }
    }

    pub(crate) fn at(path: &Path, line: usize, msg: impl Display) -> Self {
        HarnessError::Input(format!("{}:{line}: {msg}", path.display()))
    }

    pub(crate) fn io(path: &Path, err: impl Display) -> Self {
        HarnessError::Input(format!("{}: {err}", path.display()))
    }
}

impl From<parsubmod::Error> for HarnessError {
    fn from(e: parsubmod::Error) -> Self {
        HarnessError::Input(e.to_string())
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
