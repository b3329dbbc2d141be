//! Chirality phase transition of a planar relativistic oscillator in a
//! uniform magnetic field.
//!
//! A charged fermion with a linear spin-coupled potential of frequency `ω`
//! and a perpendicular magnetic field `B` has two distinct phases separated
//! by the critical field `B_c = 2mω/e`: for `B < B_c` the eigenstates are
//! built from left-chirality quanta (`⟨L_z⟩ = −ħn_l`), for `B > B_c` from
//! right-chirality quanta (`⟨L_z⟩ = +ħn_r`), and exactly at `B_c` the net
//! potential cancels and the particle is free.
//!
//! The crate provides:
//!
//! - [`params`]: parameter validation, derived scales, regime classification;
//! - [`spectra`]: the closed-form relativistic and non-relativistic spectra;
//! - [`fock`]: the truncated two-mode boson ⊗ spinor basis and operator
//!   algebra;
//! - [`oracle`]: an independent check that diagonalizes the full Hamiltonian
//!   on the truncated basis and matches it against the closed forms;
//! - [`phase`]: the `⟨L_z⟩` order parameter, field sweeps, and transition
//!   detection.
//!
//! All spectral computation is dimensionless (energies in units of `mc²`,
//! angular momenta in units of `ħ`), so natural-unit and SI inputs follow
//! the same code path.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod oracle;
pub mod params;
pub mod phase;
pub mod spectra;

pub use error::{Error, Result};
pub use fock::{FockBasis, FockState, OperatorMatrix, Spin};
pub use oracle::{
    Couplings, EigenDecomposition, MatchReport, NumericSpectrum, OracleReport, TrustWindow, Verdict,
};
pub use params::{
    classify, classify_regime, critical_field, derive_scales, Branch, DerivedScales,
    PhysicalParams, Regime,
};
pub use phase::{LzValue, SweepRecord, TransitionEstimate};
pub use spectra::{Chirality, EnergyLevel, Frame, WaveNumber};
