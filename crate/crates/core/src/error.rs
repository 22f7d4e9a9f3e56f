use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("enumeration budget exceeded: {cells} cells needed, cap is {cap}")]
    Budget { cells: u64, cap: u64 },

    #[error("integrand not locally constant at depth {depth}: values differ by {difference:e}")]
    DepthInstability { depth: u32, difference: f64 },

    #[error("quadrature did not converge in {context}: estimate {value:e}, error {error:e}")]
    NonConvergence {
        context: String,
        value: f64,
        error: f64,
    },

    #[error("unsupported test-function variant: {0}")]
    UnsupportedVariant(String),

    #[error("ill-conditioned ratio: |G(1,1)| = {value:e} but its tail majorant is {majorant:e}")]
    IllConditioned { value: f64, majorant: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
