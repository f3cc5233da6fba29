//! Error type shared across the library.

use std::fmt;

/// Errors reported by the library operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Series arithmetic on operands with different variable tags.
    VariableMismatch { lhs: &'static str, rhs: &'static str },
    /// Reciprocal of a series whose constant term vanishes.
    ZeroConstantTerm,
    /// Composition with an inner series whose constant term is nonzero.
    InnerConstantNonzero,
    /// Composition with outer order exceeding inner order.
    OrderMismatch { outer: usize, inner: usize },
    /// Nome outside (-1, 1).
    NomeOutOfRange(f64),
    /// Evaluation too close to a pole of the expansion.
    PoleProximity { what: &'static str, magnitude: f64 },
    /// A recurrence denominator vanished.
    DegenerateDenominator { what: String },
    /// Eigenvalue collision in a perturbation recursion.
    EigenvalueCollision { m: usize, m_other: usize },
    /// Basis case inconsistent with the sign pattern of the couplings.
    InvalidBasisCase(String),
    /// Sign vector not admissible (d not a non-negative integer).
    InadmissibleAlpha(String),
    /// Requested series data not available at the needed order.
    InsufficientOrder { have: usize, need: usize },
    /// Root iteration failed to converge; worst residual attached.
    NoConvergence { residual: f64 },
    /// Input violates a structural relation (e.g. the Fuchs relation).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VariableMismatch { lhs, rhs } => {
                write!(f, "series variable mismatch: {} vs {}", lhs, rhs)
            }
            Error::ZeroConstantTerm => {
                write!(f, "reciprocal of a series with zero constant term")
            }
            Error::InnerConstantNonzero => {
                write!(f, "composition requires inner series with zero constant term")
            }
            Error::OrderMismatch { outer, inner } => {
                write!(f, "outer order {} exceeds inner order {}", outer, inner)
            }
            Error::NomeOutOfRange(p) => write!(f, "nome p = {} outside (-1, 1)", p),
            Error::PoleProximity { what, magnitude } => {
                write!(f, "evaluation too close to a pole: |{}| = {:.3e}", what, magnitude)
            }
            Error::DegenerateDenominator { what } => {
                write!(f, "degenerate recurrence denominator: {}", what)
            }
            Error::EigenvalueCollision { m, m_other } => {
                write!(f, "eigenvalue collision between levels {} and {}", m, m_other)
            }
            Error::InvalidBasisCase(msg) => write!(f, "invalid basis case: {}", msg),
            Error::InadmissibleAlpha(msg) => write!(f, "inadmissible sign vector: {}", msg),
            Error::InsufficientOrder { have, need } => {
                write!(f, "series order {} insufficient, need {}", have, need)
            }
            Error::NoConvergence { residual } => {
                write!(f, "iteration did not converge (residual {:.3e})", residual)
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {}", msg),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
