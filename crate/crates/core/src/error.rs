//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by evaluation routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QcsError {
    /// Deformation parameter outside (0,1).
    #[error("deformation parameter q={0} outside (0,1)")]
    InvalidDeformation(f64),
    /// Argument outside the domain of convergence of a q-series.
    #[error("outside domain of convergence: {0}")]
    OutsideDomainOfConvergence(String),
    /// Non-terminating basic hypergeometric series with |z| >= 1.
    #[error("divergent series: |z| = {0} >= 1 and no terminating parameter")]
    DivergentSeries(f64),
    /// A denominator parameter hits q^{-m} before the series terminates.
    #[error("pole in denominator parameters: {0}")]
    DenominatorPole(String),
    /// Vanishing factor in a negative-order Pochhammer reciprocal.
    #[error("pole: vanishing factor in negative-order q-Pochhammer")]
    Pole,
    /// Wall polynomial parameter produces a vanishing denominator.
    #[error("invalid Wall parameter: {0}")]
    InvalidWallParameter(String),
    /// Series did not meet the tolerance within the term budget.
    #[error("truncation failure: tail {tail:.3e} > tol {tol:.3e} after {terms} terms")]
    TruncationFailure { tail: f64, tol: f64, terms: usize },
    /// Phase-space point outside C_{q,m}.
    #[error("outside C_{{q,m}}: (1-q)|z|^2 = {lhs:.6e} >= q^m = {rhs:.6e}")]
    OutsideDomain { lhs: f64, rhs: f64 },
    /// Complex shift leaves the declared strip of analyticity.
    #[error("shift outside analyticity domain: |Im x| = {im:.3e} > strip half-width {strip:.3e}")]
    StripViolation { im: f64, strip: f64 },
    /// Quadrature rule failed its self-check or refinement disagreed.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
}

pub type Result<T> = std::result::Result<T, QcsError>;
