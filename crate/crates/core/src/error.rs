use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a domain constraint (zero denominator, negative
    /// rate, out-of-range ratio, mismatched modes, ...).
    #[error("domain error in `{param}`: {reason}")]
    Domain { param: String, reason: String },

    /// Unknown names or malformed selectors; the CLI maps this to exit code 2.
    #[error("usage error: {0}")]
    Usage(String),

    /// Adaptive quadrature did not settle within the refinement budget.
    #[error("quadrature did not converge: last estimate {last}, previous {previous}")]
    NoConvergence { last: String, previous: String },

    /// Dense linear-algebra failure (eigensolver, non-PSD input, size cap).
    #[error("linear algebra: {0}")]
    Linalg(String),

    /// Malformed configuration file.
    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(param: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Domain {
            param: param.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Linalg(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
