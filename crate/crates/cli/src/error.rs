use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const NO_SOLUTION: i32 = 3;
    pub const DIVERGENCE: i32 = 4;
    pub const VIOLATION: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error(transparent)]
    Core(#[from] nitsche_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Whether the failure is stdout being closed by the reader.
    pub fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Io(e) => Some(e.kind()),
            CliError::Json(e) => e.io_error_kind(),
            _ => None,
        };
        kind == Some(std::io::ErrorKind::BrokenPipe)
    }

    pub fn exit_code(&self) -> i32 {
        use nitsche_core::Error as E;
        match self {
            CliError::Core(E::NoSolution(_)) => exit::NO_SOLUTION,
            CliError::Core(E::Divergence { .. }) => exit::DIVERGENCE,
            _ => exit::USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
