use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures surfaced by the solver and its verification paths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("hopping amplitude lambda must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("parameter `{name}` is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{what}: argument {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("window of {got} sites is too small, need at least {min}")]
    WindowTooSmall { min: usize, got: usize },

    #[error("sequence length {0} is not of the form 2N+1")]
    EvenLength(usize),

    #[error("no odd bound state: |delta| = {0} does not exceed 1")]
    NoKappa(f64),

    #[error("operation requires alpha = -1, got alpha = {0}")]
    NotAlphaMinusOne(f64),

    #[error("operation requires alpha != -1")]
    AlphaMinusOne,

    #[error("gamma = {gamma} is not a root of the secular equation (residual {residual:e})")]
    NotARoot { gamma: f64, residual: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable category used by the CLI error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Internal(_) => "internal",
            Error::WindowTooSmall { .. } | Error::EvenLength(_) => "window",
            _ => "domain",
        }
    }
}
