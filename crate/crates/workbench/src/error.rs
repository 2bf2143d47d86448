use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WbError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },

    /// A file parsed or validated badly; `field` is a JSON path such as `matrices[2][0]`.
    #[error("{}: field '{field}': {message}", path.display())]
    Load { path: PathBuf, field: String, message: String },

    #[error("invalid arguments: {0}")]
    Args(String),

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: indrep::Error,
    },
}

pub type WbResult<T> = std::result::Result<T, WbError>;

/// Attaches `module/op` context to core errors.
pub trait Context<T> {
    fn ctx(self, context: &str) -> WbResult<T>;
}

impl<T> Context<T> for indrep::Result<T> {
    fn ctx(self, context: &str) -> WbResult<T> {
        self.map_err(|source| WbError::Core { context: context.to_string(), source })
    }
}
