use thiserror::Error;

/// Errors raised by the geometry, geodesic and metric routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A point is not where an operation requires it (e.g. not on the boundary).
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid caller input: zero vectors, coincident points, points outside the base.
    #[error("argument error: {0}")]
    Argument(String),
    /// An iterative or quadrature routine did not reach its tolerance.
    #[error("numeric error: {message} (residual {residual:.3e})")]
    Numeric { message: String, residual: f64 },
    /// Geodesic parameters describing a constant map or an excluded configuration.
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    /// The base failed a structural check (no boundary crossing within 2R, empty interior).
    #[error("inconsistent domain: {0}")]
    InconsistentDomain(String),
    /// Operation not available for this kind of base.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Malformed domain description or configuration text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn numeric(message: impl Into<String>, residual: f64) -> Self {
        Error::Numeric {
            message: message.into(),
            residual,
        }
    }
}
