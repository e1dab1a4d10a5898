use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lower parameter of a hypergeometric series hits a nonpositive integer.
    #[error("pole parameter: {name} = {value} is a nonpositive integer")]
    PoleParameter { name: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Term caps were reached before the tail bound was met.
    #[error("series not converged after {terms} terms (value {value}, est. error {est_error:e})")]
    NotConverged {
        value: f64,
        terms: usize,
        est_error: f64,
    },

    #[error("parameter regime violated: {0}")]
    Regime(String),

    #[error("finite-difference stencil leaves the domain: {0}")]
    StencilOutOfDomain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable tag used in serialized reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleParameter { .. } => "PoleParameter",
            Error::Domain(_) => "DomainError",
            Error::NotConverged { .. } => "NotConverged",
            Error::Regime(_) => "RegimeError",
            Error::StencilOutOfDomain(_) => "StencilOutOfDomain",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
