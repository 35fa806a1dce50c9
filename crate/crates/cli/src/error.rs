use std::fmt::Display;

/// Exit code 0: success.
pub const EXIT_OK: i32 = 0;
/// Exit code 1: a check in the report failed, or a computation broke down.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit code 2: bad flags, config or parameters.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn input(e: impl Display) -> Self {
        Self::Input(e.to_string())
    }

    pub fn numerical(e: impl Display) -> Self {
        Self::Numerical(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Config(_) | Self::Input(_) => EXIT_USAGE,
            Self::Numerical(_) | Self::Io(_) => EXIT_VIOLATION,
        }
    }
}
