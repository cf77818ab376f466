use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("physics error: {0}")]
    Physics(#[from] mzclock::Error),
    #[error("unknown system `{name}`; available: {}", available.join(", "))]
    UnknownSystem {
        name: String,
        available: Vec<String>,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Physics(_) => 3,
            CliError::UnknownSystem { .. } => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
