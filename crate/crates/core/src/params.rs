//! Physical parameters, derived frequency scales, and regime classification.
//!
//! The system is a charged fermion of mass `m` in the plane, subject to a
//! linear spin-coupled potential of frequency `ω` and a uniform magnetic
//! field of magnitude `B`. Everything downstream is controlled by two
//! dimensionless numbers:
//!
//! - `r_ω = ħω / mc²`, the oscillator energy relative to the rest energy,
//! - `b = B / B_c`, the field relative to the critical field `B_c = 2mω/e`.
//!
//! At `b = 1` the vector potential exactly cancels the linear potential and
//! the particle is free; `b < 1` is the left-chirality phase and `b > 1` the
//! right-chirality phase. All spectral computation is done in these
//! dimensionless variables (energies in units of `mc²`), so SI inputs with
//! extreme float scales never enter the numerics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance on `B` for detecting the critical point.
pub const DEFAULT_CRITICAL_REL_TOL: f64 = 1e-12;

/// Fundamental constants and controls defining the system.
///
/// `hbar`, `c`, `m`, `e` and `omega` must be strictly positive; `b_field`
/// is a magnitude (the field orientation is baked into the equations) and
/// must be non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Speed of light (m/s).
    pub c: f64,
    /// Fermion mass (kg).
    pub m: f64,
    /// Charge magnitude (C).
    pub e: f64,
    /// Oscillator angular frequency (rad/s).
    pub omega: f64,
    /// External field magnitude (T).
    pub b_field: f64,
}

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidParams {
            field,
            reason: format!("must be strictly positive and finite, got {value}"),
        });
    }
    Ok(())
}

impl PhysicalParams {
    pub fn new(hbar: f64, c: f64, m: f64, e: f64, omega: f64, b_field: f64) -> Result<Self> {
        require_positive("hbar", hbar)?;
        require_positive("c", c)?;
        require_positive("m", m)?;
        require_positive("e", e)?;
        require_positive("omega", omega)?;
        if !b_field.is_finite() || b_field < 0.0 {
            return Err(Error::InvalidParams {
                field: "b_field",
                reason: format!("must be non-negative and finite, got {b_field}"),
            });
        }
        Ok(Self {
            hbar,
            c,
            m,
            e,
            omega,
            b_field,
        })
    }

    /// Natural-units preset: `ħ = c = m = e = 1` exactly.
    pub fn natural(omega: f64, b_field: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, 1.0, omega, b_field)
    }

    /// Rest energy `mc²` (J), the internal energy unit.
    pub fn mc2(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// `r_ω = ħω / mc²`.
    pub fn r_omega(&self) -> f64 {
        self.hbar * self.omega / self.mc2()
    }

    /// `b = B / B_c = eB / 2mω`.
    pub fn b_ratio(&self) -> f64 {
        self.b_field / critical_field(self)
    }

    /// Bare oscillator ground-state width `√(ħ/mω)` (m).
    pub fn oscillator_width(&self) -> f64 {
        (self.hbar / (self.m * self.omega)).sqrt()
    }
}

/// Critical field `B_c = 2mω/e` at which the net potential vanishes.
pub fn critical_field(params: &PhysicalParams) -> f64 {
    2.0 * params.m * params.omega / params.e
}

/// Frequencies and dimensionless factors derived from [`PhysicalParams`].
///
/// `f_s = 1 − 1/b` only exists for `B > 0` and is `None` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedScales {
    /// Cyclotron frequency `ω_c = eB/m` (rad/s).
    pub omega_c: f64,
    /// `ω̃ = ω_c / 2` (rad/s).
    pub omega_tilde: f64,
    /// `ω_T = ω − ω̃` (rad/s), positive in the left phase.
    pub omega_t: f64,
    /// `ω̃_T = ω̃ − ω` (rad/s), positive in the right phase.
    pub omega_tilde_t: f64,
    /// Critical field `B_c = 2mω/e` (T).
    pub b_c: f64,
    /// Dimensionless field `b = B/B_c`.
    pub b: f64,
    /// Dimensionless oscillator strength `r_ω = ħω/mc²`.
    pub r_omega: f64,
    /// Weak-field spectrum factor `F_w = 1 − b`.
    pub f_w: f64,
    /// Strong-field spectrum factor `F_s = 1 − 1/b`, undefined at `B = 0`.
    pub f_s: Option<f64>,
}

/// Aggregate every derived scale for a parameter set.
pub fn derive_scales(params: &PhysicalParams) -> DerivedScales {
    let omega_c = params.e * params.b_field / params.m;
    let omega_tilde = omega_c / 2.0;
    let b_c = critical_field(params);
    let b = params.b_field / b_c;
    DerivedScales {
        omega_c,
        omega_tilde,
        omega_t: params.omega - omega_tilde,
        omega_tilde_t: omega_tilde - params.omega,
        b_c,
        b,
        r_omega: params.r_omega(),
        f_w: 1.0 - b,
        f_s: if params.b_field > 0.0 {
            Some(1.0 - 1.0 / b)
        } else {
            None
        },
    }
}

/// Which side of the chirality transition the parameters sit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `B < B_c`: left-chirality phase.
    LeftPhase,
    /// `|B − B_c| ≤ tol·B_c`: free-particle point, chirality undefined.
    Critical,
    /// `B > B_c`: right-chirality phase.
    RightPhase,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::LeftPhase => write!(f, "left"),
            Regime::Critical => write!(f, "critical"),
            Regime::RightPhase => write!(f, "right"),
        }
    }
}

/// Classify the regime with a relative tolerance on `B` around `B_c`.
pub fn classify_regime(params: &PhysicalParams, rel_tol: f64) -> Result<Regime> {
    if !(0.0..1.0).contains(&rel_tol) {
        return Err(Error::InvalidParams {
            field: "rel_tol",
            reason: format!("must lie in [0, 1), got {rel_tol}"),
        });
    }
    let b_c = critical_field(params);
    let regime = if params.b_field < b_c * (1.0 - rel_tol) {
        Regime::LeftPhase
    } else if params.b_field > b_c * (1.0 + rel_tol) {
        Regime::RightPhase
    } else {
        Regime::Critical
    };
    Ok(regime)
}

/// [`classify_regime`] at the default tolerance.
pub fn classify(params: &PhysicalParams) -> Regime {
    classify_regime(params, DEFAULT_CRITICAL_REL_TOL).expect("default tolerance is valid")
}

/// Particle (`Positive`) or antiparticle (`Negative`) energy branch.
///
/// `Positive` maps to the upper sign of every `±` spectrum formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Positive => write!(f, "+"),
            Branch::Negative => write!(f, "-"),
        }
    }
}
