use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two values that must live in the same space do not.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("pair is not diagonal: components are {distance} apart (tolerance {tolerance})")]
    NotDiagonal { distance: f64, tolerance: f64 },

    /// A Picard step produced a point with non-finite coordinates.
    #[error("non-finite point produced at step {step}")]
    NonFinite { step: usize },

    /// An iterative estimate did not settle within its budget.
    #[error("inconclusive after {iterations} iterations: best upper bound {best_upper}, last change {last_change}")]
    Inconclusive {
        iterations: usize,
        best_upper: f64,
        last_change: f64,
    },

    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::SpaceMismatch(msg.into())
    }
}
