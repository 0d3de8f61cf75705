//! CLI error type and its exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error ({origin}): {msg}")]
    Config { origin: String, msg: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] cavity_core::Error),
}

impl CliError {
    pub fn config(origin: impl Into<String>, msg: impl Into<String>) -> Self {
        CliError::Config {
            origin: origin.into(),
            msg: msg.into(),
        }
    }

    /// 2 config, 3 domain or pole, 4 convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use cavity_core::Error as E;
        match self {
            CliError::Config { .. } => 2,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::Config { .. } => 2,
                E::Convergence { .. } => 4,
                E::Domain(_)
                | E::UnitMode(_)
                | E::Precondition(_)
                | E::Instability(_)
                | E::Pole(_)
                | E::DegenerateMode(_) => 3,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
