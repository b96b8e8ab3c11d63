//! Error types shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The geometry / feasible-set / composite-term triple has no closed-form
    /// subproblem solver.
    #[error("unsupported geometry/set/composite combination: {0}")]
    UnsupportedCombination(String),

    /// Linear minimization was requested over a set with no finite minimizer.
    #[error("linear minimization over an unbounded set")]
    Unbounded,

    /// `L` equals (or falls below) `sigma_f_bar * sigma_d`, so the constant
    /// scaling parameter of the structured schedules degenerates to zero.
    #[error("degenerate scaling: L - sigma_f_bar*sigma_d = {0} is not positive")]
    DegenerateBeta(f64),

    /// `lambda_0*sigma_f + beta_{-1} = 0`, which leaves the first certificate
    /// increment undefined for non-smooth runs.
    #[error("degenerate start: lambda_0*sigma_f + beta_(-1) must be positive")]
    DegenerateC0,

    /// The curvature margin of a weak-smoothness schedule is non-negative at
    /// some iteration, so its gap bound does not apply.
    #[error("non-negative curvature margin at iteration {k}: alpha = {alpha}")]
    NonNegativeAlpha { k: usize, alpha: f64 },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    /// Evaluation outside the domain of the prox-function (e.g. entropy terms
    /// at a significantly negative coordinate).
    #[error("domain error: {0}")]
    Domain(String),

    /// A runtime certificate inequality failed beyond tolerance in strict mode.
    #[error("invariant violated at iteration {k}: {what}")]
    InvariantViolated { k: usize, what: String },

    /// A bound table or certificate was requested without a reference optimum.
    #[error("missing reference optimum")]
    MissingReference,
}

pub type Result<T> = std::result::Result<T, Error>;
