//! Closed-form energy spectra for the three regimes.
//!
//! Internally every energy is dimensionless, in units of `mc²`. With
//! `r_ω = ħω/mc²` and `b = B/B_c` the relativistic levels are
//!
//! - left phase (`b < 1`):   `E/mc² = ± √(4 r_ω (1−b) ñ + 1)`,
//! - right phase (`b > 1`):  `E/mc² = ± √(4 r_ω (b−1) ñ + 1)`,
//!
//! where the effective index `ñ` carries the branch convention fixed by the
//! chiral number-operator eigenvalue equations: in the left phase the
//! positive branch has `ñ = n_l` and the negative branch `ñ = n_l + 1`; in
//! the right phase the assignment is swapped (`ñ = n_r + 1` positive,
//! `ñ = n_r` negative). Published restatements of these spectra disagree on
//! the sign ordering; the convention here follows the operator equations
//! directly and is confirmed empirically by the diagonalization oracle
//! (the zero mode sits at `+mc²` for `b < 1` and at `−mc²` for `b > 1`).
//!
//! Non-relativistic energies are rest-mass-subtracted and also reported in
//! units of `mc²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{classify, derive_scales, Branch, PhysicalParams, Regime};

/// Which excitation tower builds the eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Left,
    Right,
    Undefined,
}

impl std::fmt::Display for Chirality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Chirality::Left => write!(f, "left"),
            Chirality::Right => write!(f, "right"),
            Chirality::Undefined => write!(f, "undefined"),
        }
    }
}

/// Relativistic spectrum or its non-relativistic (rest-mass-subtracted) limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    Relativistic,
    NonRelativistic,
}

impl std::fmt::Display for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Frame::Relativistic => write!(f, "rel"),
            Frame::NonRelativistic => write!(f, "nonrel"),
        }
    }
}

/// One labelled energy level, energy in units of `mc²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub n: u32,
    pub branch: Branch,
    pub chirality: Chirality,
    pub frame: Frame,
    /// Energy in units of `mc²` (signed; negative-branch energies are negative).
    pub energy: f64,
}

/// Base and quantized wave numbers of the oscillator spectrum.
///
/// `k² = 4mω/ħ` and `k_n² = k² (n + 1/2 ∓ 1/2)` per branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumber {
    /// Base inverse length `k` (1/m).
    pub k: f64,
}

impl WaveNumber {
    /// `k = √(4mω/ħ)` for the given parameters.
    pub fn base(params: &PhysicalParams) -> Self {
        Self {
            k: (4.0 * params.m * params.omega / params.hbar).sqrt(),
        }
    }

    /// Quantized `k_n² = k² ñ`, with `ñ = n` (positive branch) or `n + 1`
    /// (negative branch).
    pub fn quantized_sq(&self, n: u32, branch: Branch) -> f64 {
        self.k * self.k * left_index(n, branch)
    }
}

/// Left-phase effective index: `ñ = n_l` positive, `n_l + 1` negative.
fn left_index(n: u32, branch: Branch) -> f64 {
    match branch {
        Branch::Positive => n as f64,
        Branch::Negative => (n + 1) as f64,
    }
}

/// Right-phase effective index: `ñ = n_r + 1` positive, `n_r` negative.
fn right_index(n: u32, branch: Branch) -> f64 {
    match branch {
        Branch::Positive => (n + 1) as f64,
        Branch::Negative => n as f64,
    }
}

fn require_left(params: &PhysicalParams) -> Result<()> {
    match classify(params) {
        Regime::RightPhase => Err(Error::Regime {
            expected: Regime::LeftPhase,
            actual: Regime::RightPhase,
        }),
        _ => Ok(()),
    }
}

fn require_right(params: &PhysicalParams) -> Result<()> {
    match classify(params) {
        Regime::LeftPhase => Err(Error::Regime {
            expected: Regime::RightPhase,
            actual: Regime::LeftPhase,
        }),
        _ => Ok(()),
    }
}

/// Free-fermion dispersion `±√(ħ²k²c² + m²c⁴)`, in units of `mc²`.
pub fn free_particle_energy(k: f64, params: &PhysicalParams, branch: Branch) -> Result<f64> {
    if k.is_nan() || k < 0.0 {
        return Err(Error::InvalidParams {
            field: "k",
            reason: format!("wave number must be non-negative, got {k}"),
        });
    }
    let x = params.hbar * k / (params.m * params.c);
    Ok(branch.sign() * (x * x + 1.0).sqrt())
}

/// Left-phase relativistic level `±√(4 r_ω (1−b) ñ + 1)` in units of `mc²`.
///
/// Valid for `B ≤ B_c`; errors in the right phase.
pub fn left_energy_rel(n: u32, branch: Branch, params: &PhysicalParams) -> Result<f64> {
    require_left(params)?;
    let s = derive_scales(params);
    Ok(branch.sign() * (4.0 * s.r_omega * s.f_w * left_index(n, branch) + 1.0).sqrt())
}

/// Right-phase relativistic level `±√(4 r_ω (b−1) ñ + 1)` in units of `mc²`.
///
/// Valid for `B ≥ B_c`; errors in the left phase.
pub fn right_energy_rel(n: u32, branch: Branch, params: &PhysicalParams) -> Result<f64> {
    require_right(params)?;
    let s = derive_scales(params);
    Ok(branch.sign() * (4.0 * s.r_omega * (s.b - 1.0) * right_index(n, branch) + 1.0).sqrt())
}

/// Left-phase non-relativistic level, rest mass subtracted, in units of `mc²`:
/// `E⁺ = 2 r_ω F_w n_l`, `E⁻ = −2 r_ω F_w (n_l + 1)`.
pub fn left_energy_nonrel(n: u32, branch: Branch, params: &PhysicalParams) -> Result<f64> {
    require_left(params)?;
    let s = derive_scales(params);
    Ok(branch.sign() * 2.0 * s.r_omega * s.f_w * left_index(n, branch))
}

/// Right-phase non-relativistic level, rest mass subtracted, in units of
/// `mc²`: `E⁺ = F_s (ħeB/m)(n_r + 1)`, `E⁻ = −F_s (ħeB/m) n_r`. With
/// `ħeB/m = 2 r_ω b · mc²` this is `±2 r_ω (b−1) ñ`.
pub fn right_energy_nonrel(n: u32, branch: Branch, params: &PhysicalParams) -> Result<f64> {
    require_right(params)?;
    let s = derive_scales(params);
    Ok(branch.sign() * 2.0 * s.r_omega * (s.b - 1.0) * right_index(n, branch))
}

/// Zero-field oscillator spectrum `±√(4 r_ω ñ + 1)`: [`left_energy_rel`]
/// with `B` forced to zero. Ignores `params.b_field`.
pub fn dirac_oscillator_energy(n: u32, branch: Branch, params: &PhysicalParams) -> f64 {
    let r = params.r_omega();
    branch.sign() * (4.0 * r * left_index(n, branch) + 1.0).sqrt()
}

/// Landau-level spectrum `±√(2ħc²eB ñ + m²c⁴)` in units of `mc²`:
/// [`right_energy_rel`] with `ω` forced to zero. Ignores `params.omega`.
pub fn landau_level_energy(n: u32, branch: Branch, params: &PhysicalParams) -> f64 {
    // 2ħc²eB / (mc²)² = 2ħeB / m²c²
    let lam =
        2.0 * params.hbar * params.e * params.b_field / (params.m * params.m * params.c * params.c);
    branch.sign() * (lam * right_index(n, branch) + 1.0).sqrt()
}

/// Enumerate levels `n = 0..=n_max` for both branches using the
/// regime-appropriate formula. At the critical point the spectrum collapses
/// to `±mc²` (relativistic) or `0` (non-relativistic) with undefined
/// chirality.
pub fn spectrum_table(params: &PhysicalParams, n_max: u32, frame: Frame) -> Vec<EnergyLevel> {
    let regime = classify(params);
    let mut levels = Vec::with_capacity(2 * (n_max as usize + 1));
    for branch in [Branch::Positive, Branch::Negative] {
        for n in 0..=n_max {
            let (chirality, energy) = match (regime, frame) {
                (Regime::LeftPhase, Frame::Relativistic) => (
                    Chirality::Left,
                    left_energy_rel(n, branch, params).expect("left regime checked"),
                ),
                (Regime::LeftPhase, Frame::NonRelativistic) => (
                    Chirality::Left,
                    left_energy_nonrel(n, branch, params).expect("left regime checked"),
                ),
                (Regime::RightPhase, Frame::Relativistic) => (
                    Chirality::Right,
                    right_energy_rel(n, branch, params).expect("right regime checked"),
                ),
                (Regime::RightPhase, Frame::NonRelativistic) => (
                    Chirality::Right,
                    right_energy_nonrel(n, branch, params).expect("right regime checked"),
                ),
                (Regime::Critical, Frame::Relativistic) => (Chirality::Undefined, branch.sign()),
                (Regime::Critical, Frame::NonRelativistic) => (Chirality::Undefined, 0.0),
            };
            levels.push(EnergyLevel {
                n,
                branch,
                chirality,
                frame,
                energy,
            });
        }
    }
    levels
}
