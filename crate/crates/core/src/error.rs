use thiserror::Error;

use crate::chebyshev::BestApprox;

/// Errors raised by the projection, duality and approximation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates the documented precondition of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No entry satisfied a selection rule (e.g. no negative entry up to `m`).
    #[error("empty selection: {0}")]
    EmptySelection(String),

    /// The requested combination of element kinds has no defined pairing.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// The projection set is a singleton, so there is nothing to sample.
    #[error("projection set is a singleton: {0}")]
    Singleton(String),

    /// The exchange iteration did not reach the requested tolerance; `best` is
    /// the certificate with the smallest defect seen.
    #[error("remez did not converge after {iterations} iterations (defect {defect:e})")]
    NonConvergence { iterations: usize, defect: f64, best: Box<BestApprox> },

    /// Difference quotient with a zero denominator.
    #[error("zero denominator: (u, v) coincides with the base point")]
    ZeroDenominator,

    /// A witness path produced a selection that is not in the projection set.
    #[error("witness path `{label}` violates selection validity at t = {t:e}: {reason}")]
    InvalidSelection { label: String, t: f64, reason: String },

    /// The functional matches none of the constructions available for this case.
    #[error("no witness construction applies: {0}")]
    CaseSelection(String),

    /// Malformed wire input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
