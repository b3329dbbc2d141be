//! Error types shared by the whole crate.

use crate::params::Regime;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A physical parameter or configuration value failed validation.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    /// A phase-specific spectrum formula was called in the wrong regime.
    #[error("operation requires regime {expected:?} but parameters are {actual:?}")]
    Regime { expected: Regime, actual: Regime },

    /// The orbital-angular-momentum order parameter has no value at the
    /// critical field.
    #[error("order parameter is undefined at the critical field")]
    CriticalUndefined,

    /// A sweep did not bracket the phase transition.
    #[error("order-parameter sign change not bracketed by the sweep range")]
    NotBracketed,

    /// Hamiltonian assembly produced a matrix that fails the Hermiticity gate.
    #[error("operator assembly failed: {0}")]
    Assembly(String),

    /// The eigensolver exceeded its iteration cap.
    #[error("eigensolver failed to converge: {0}")]
    Convergence(String),

    /// The requested trust window cannot be established at this basis size.
    #[error("truncated basis too small: {0}")]
    Truncation(String),

    /// A degenerate energy cluster could not be resolved into angular-momentum
    /// eigenstates.
    #[error("degenerate cluster mixing exceeds tolerance: {0}")]
    Degeneracy(String),
}
