//! Crate-wide error type.

use crate::problem::ValidationReport;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A grid has too few nodes for the requested stencil or quadrature.
    #[error("grid needs at least {needed} nodes, got {got}")]
    GridTooSmall { needed: usize, got: usize },

    /// A user-supplied function produced a non-finite value.
    #[error("non-finite value at node {node} ({context})")]
    NonFinite { node: usize, context: String },

    /// A problem violates the standing non-degeneracy hypotheses.
    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),

    /// A problem file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
