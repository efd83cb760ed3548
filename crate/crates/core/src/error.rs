use thiserror::Error;

use crate::verifier::Genericity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge for degree {degree} after {iterations} iterations ({restarts} restarts, max correction {max_correction:e})")]
    NoConvergence {
        degree: usize,
        iterations: usize,
        restarts: usize,
        max_correction: f64,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("representation reconstruction failed: {name} residual {residual:e} exceeds {tol:e}")]
    Reconstruction { name: String, residual: f64, tol: f64 },

    #[error("evaluation error: {0} vanishes at the evaluation point")]
    Vanishing(String),

    #[error("branch point: {0}")]
    BranchPoint(String),

    #[error("degenerate slope ({p},{q}): p = 4q makes the extra-component trace constant")]
    DegenerateSlope { p: i64, q: i64 },

    #[error("non-generic trace value: {reason}")]
    NonGeneric {
        reason: String,
        diagnostics: Option<Genericity>,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
