use abvar_core::classify::ClassifyError;
use abvar_lmfdb::LmfdbError;

/// Exit status per error family.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const LABEL: i32 = 3;
    pub const NOT_WEIL: i32 = 4;
    pub const DATA_SOURCE: i32 = 5;
    pub const PIPELINE: i32 = 6;
    pub const VERIFICATION: i32 = 7;
    pub const IO: i32 = 8;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Lmfdb(#[from] LmfdbError),
    #[error("not a Weil polynomial: {0}")]
    NotWeil(String),
    #[error(transparent)]
    Pipeline(#[from] ClassifyError),
    #[error("verification failed:\n  {}", .0.join("\n  "))]
    Verification(Vec<String>),
    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Lmfdb(e) => match e {
                LmfdbError::MalformedCode { .. } | LmfdbError::MalformedLabel { .. } => exit::LABEL,
                LmfdbError::WeilValidationFailed { .. } => exit::NOT_WEIL,
                _ => exit::DATA_SOURCE,
            },
            CliError::NotWeil(_) => exit::NOT_WEIL,
            CliError::Pipeline(_) => exit::PIPELINE,
            CliError::Verification(_) => exit::VERIFICATION,
            CliError::Checkpoint { .. } | CliError::Io(_) => exit::IO,
        }
    }
}
