use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is dimensionful and unavailable in ratio mode")]
    UnitMode(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unstable regime: {0}")]
    Instability(String),
    #[error("pole reached: {0}")]
    Pole(String),
    #[error("normal mode {0} has zero frequency")]
    DegenerateMode(usize),
    #[error(
        "Jacobi eigensolver not converged after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    Convergence { sweeps: usize, off_norm: f64 },
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
