use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },
    #[error(transparent)]
    Core(#[from] ccgbo::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Trace { path: PathBuf, reason: String },
    #[error("no runs found in {0}")]
    NoRuns(PathBuf),
    #[error("run {run_id} has {got} trace rows, expected {expected} like the rest of its group")]
    Ragged { run_id: String, got: usize, expected: usize },
    #[error("{failed} of {total} runs failed")]
    RunsFailed { failed: usize, total: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Self::Io { path, source }
    }

    pub(crate) fn trace(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        Self::Trace {
            path: path.into(),
            reason: reason.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
