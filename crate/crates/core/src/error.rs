use thiserror::Error;

/// Errors raised by the toolkit's numeric and arithmetic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("the Kronecker symbol (0/0) is undefined")]
    UndefinedSymbol,

    #[error("integer {0} exceeds the supported range (|n| < 2^63)")]
    OutOfRange(i128),

    #[error("quadrature did not converge: value {value}, error estimate {err_estimate} after {subdivisions} subdivisions")]
    NonConvergence {
        value: f64,
        err_estimate: f64,
        subdivisions: usize,
    },

    #[error("budget infeasible: {0}")]
    BudgetInfeasible(String),

    #[error("enumeration cap of {cap} members exceeded")]
    CapExceeded { cap: usize },

    #[error("resonator window is empty; supply an explicit window override")]
    EmptyWindow,

    #[error("resonator family `{family}` is incompatible with target `{target}`")]
    IncompatibleTarget { family: String, target: String },

    #[error("fewer than {needed} usable points for the fit (got {got})")]
    TooFewPoints { needed: usize, got: usize },

    #[error("integer overflow while forming {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
