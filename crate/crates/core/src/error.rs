use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Class parameters violate their admissible ranges.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The endpoints handed to a bracketing routine do not enclose a root
    /// or a minimum.
    #[error("invalid bracket: {0}")]
    Bracket(String),

    /// An iterative routine hit its iteration cap.
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: String, iterations: usize },

    /// A series needed more terms than the hard cap allows.
    #[error("series truncation cap of {cap} terms exceeded: {what}")]
    TruncationCap { what: String, cap: usize },

    /// A function evaluation returned NaN or infinity.
    #[error("non-finite evaluation at x = {0}")]
    NonFinite(f64),

    /// The requested variant does not exist for this class.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
