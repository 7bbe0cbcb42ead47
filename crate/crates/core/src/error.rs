use thiserror::Error;

/// Errors raised by the geometry and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("body is not certified convex: min curvature eigenvalue {min_eigenvalue:.3e} at {node:?}")]
    NotConvex { node: Vec<f64>, min_eigenvalue: f64 },

    #[error("support or radial function not positive ({value:.3e}) at {node:?}")]
    NonPositive { node: Vec<f64>, value: f64 },

    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
