//! Order parameter `⟨L_z⟩`, field sweeps, and transition detection.
//!
//! The orbital angular momentum expectation of level `n` is the order
//! parameter of the chirality transition: it equals `−ħ n_l` everywhere in
//! the left phase and `+ħ n_r` everywhere in the right phase, for both
//! energy branches and in both the relativistic and non-relativistic
//! frames. At the critical field it is undetermined (the towers merge), so
//! it is exposed as an explicit undefined value rather than a limit.
//!
//! The expectation values are computed through the energy-substitution
//! identities (e.g. `⟨L_z⁺⟩ = −(E² − m²c⁴)/(2 c² m ω_T) + ħ n_l` in the
//! left phase) and then asserted equal to the simplified `∓ħn` closed form,
//! so the long-form expressions stay exercised.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{classify, derive_scales, Branch, PhysicalParams, Regime};
use crate::spectra::{
    left_energy_nonrel, left_energy_rel, right_energy_nonrel, right_energy_rel, spectrum_table,
    EnergyLevel, Frame,
};

/// One order-parameter value, in units of `ħ`.
///
/// `defined` is `false` only at the critical point, where `value` is NaN.
/// `n = 0` is permitted but degenerate as an order parameter: it vanishes
/// in both phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LzValue {
    pub n: u32,
    pub branch: Branch,
    pub frame: Frame,
    /// `⟨L_z⟩ / ħ`; NaN when `defined` is false.
    pub value: f64,
    pub defined: bool,
}

/// One grid point of a field sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    /// Field magnitude (T).
    pub b_field: f64,
    /// Dimensionless `b = B/B_c`.
    pub b: f64,
    pub regime: Regime,
    pub levels: Vec<EnergyLevel>,
    /// Same `(n, branch)` keys as `levels`.
    pub lz: Vec<LzValue>,
}

/// Estimated transition field with its grid-resolution error bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransitionEstimate {
    /// Estimated critical field (T).
    pub b_field: f64,
    /// Half the grid spacing: the bracketing uncertainty.
    pub half_width: f64,
}

/// Guard against silent algebra drift: the substitution formulas must
/// reduce to `∓ħn` exactly (up to rounding).
fn checked(n: u32, expected_sign: f64, value: f64) -> f64 {
    let closed = expected_sign * n as f64;
    debug_assert!(
        (value - closed).abs() <= 1e-12 * (n as f64 + 1.0),
        "substitution formula drifted: {value} vs {closed}"
    );
    value
}

/// Relativistic `⟨L_z⟩` of level `(n, branch)`, in units of `ħ`, via the
/// energy-substitution identities. Reduces to `−ħ n_l` in the left phase
/// and `+ħ n_r` in the right phase, for both branches.
pub fn lz_expectation_rel(n: u32, branch: Branch, params: &PhysicalParams) -> Result<LzValue> {
    let s = derive_scales(params);
    let mc2 = params.mc2();
    let hbar = params.hbar;
    let value = match classify(params) {
        Regime::Critical => return Err(Error::CriticalUndefined),
        Regime::LeftPhase => {
            let e = left_energy_rel(n, branch, params)? * mc2;
            // (E² − m²c⁴)/(2 c² m ω_T) carries units of ħ
            let term = (e * e - mc2 * mc2) / (2.0 * params.c * params.c * params.m * s.omega_t);
            let lz = match branch {
                Branch::Positive => -term + hbar * n as f64,
                Branch::Negative => -term + hbar * (n as f64 + 2.0),
            };
            checked(n, -1.0, lz / hbar)
        }
        Regime::RightPhase => {
            let e = right_energy_rel(n, branch, params)? * mc2;
            let term =
                (e * e - mc2 * mc2) / (2.0 * params.c * params.c * params.m * s.omega_tilde_t);
            let lz = match branch {
                Branch::Positive => term - hbar * (n as f64 + 2.0),
                Branch::Negative => term - hbar * n as f64,
            };
            checked(n, 1.0, lz / hbar)
        }
    };
    Ok(LzValue {
        n,
        branch,
        frame: Frame::Relativistic,
        value,
        defined: true,
    })
}

/// Non-relativistic `⟨L_z⟩` of level `(n, branch)`, in units of `ħ`.
/// Identical closed values to [`lz_expectation_rel`].
pub fn lz_expectation_nonrel(n: u32, branch: Branch, params: &PhysicalParams) -> Result<LzValue> {
    let s = derive_scales(params);
    let mc2 = params.mc2();
    let hbar = params.hbar;
    let value = match classify(params) {
        Regime::Critical => return Err(Error::CriticalUndefined),
        Regime::LeftPhase => {
            let e = left_energy_nonrel(n, branch, params)? * mc2;
            let lz = match branch {
                Branch::Positive => -e / s.omega_t + hbar * n as f64,
                Branch::Negative => e / s.omega_t + hbar * (n as f64 + 2.0),
            };
            checked(n, -1.0, lz / hbar)
        }
        Regime::RightPhase => {
            let e = right_energy_nonrel(n, branch, params)? * mc2;
            let lz = match branch {
                Branch::Positive => e / s.omega_tilde_t - hbar * (n as f64 + 2.0),
                Branch::Negative => -e / s.omega_tilde_t - hbar * n as f64,
            };
            checked(n, 1.0, lz / hbar)
        }
    };
    Ok(LzValue {
        n,
        branch,
        frame: Frame::NonRelativistic,
        value,
        defined: true,
    })
}

/// The order parameter at one parameter point: `⟨L_z⟩/ħ`, or the undefined
/// marker at the critical field.
pub fn order_parameter(params: &PhysicalParams, n: u32, branch: Branch, frame: Frame) -> LzValue {
    let result = match frame {
        Frame::Relativistic => lz_expectation_rel(n, branch, params),
        Frame::NonRelativistic => lz_expectation_nonrel(n, branch, params),
    };
    match result {
        Ok(v) => v,
        Err(_) => LzValue {
            n,
            branch,
            frame,
            value: f64::NAN,
            defined: false,
        },
    }
}

/// Evaluate levels and order parameters on a uniform field grid, endpoints
/// inclusive.
pub fn sweep(
    params: &PhysicalParams,
    b_start: f64,
    b_end: f64,
    steps: usize,
    n_max: u32,
    frame: Frame,
) -> Result<Vec<SweepRecord>> {
    if !(b_start.is_finite() && b_end.is_finite() && b_start < b_end) {
        return Err(Error::InvalidParams {
            field: "b_range",
            reason: format!("need finite B_start < B_end, got [{b_start}, {b_end}]"),
        });
    }
    if b_start < 0.0 {
        return Err(Error::InvalidParams {
            field: "b_range",
            reason: format!("field magnitude cannot be negative, got B_start = {b_start}"),
        });
    }
    if steps < 2 {
        return Err(Error::InvalidParams {
            field: "steps",
            reason: format!("need at least 2 grid points, got {steps}"),
        });
    }
    let spacing = (b_end - b_start) / (steps - 1) as f64;
    let mut records = Vec::with_capacity(steps);
    for i in 0..steps {
        let b_field = if i == steps - 1 {
            b_end
        } else {
            b_start + spacing * i as f64
        };
        let point = PhysicalParams { b_field, ..*params };
        let levels = spectrum_table(&point, n_max, frame);
        let lz = levels
            .iter()
            .map(|l| order_parameter(&point, l.n, l.branch, frame))
            .collect();
        records.push(SweepRecord {
            b_field,
            b: point.b_ratio(),
            regime: classify(&point),
            levels,
            lz,
        });
    }
    Ok(records)
}

fn lz_at(record: &SweepRecord, n: u32) -> Option<&LzValue> {
    record
        .lz
        .iter()
        .find(|v| v.n == n && v.branch == Branch::Positive)
}

/// Locate the transition as the sign change (or undefined point) of the
/// order parameter `⟨L_z⟩(n)` along a sweep. The error bound is half the
/// grid spacing.
pub fn detect_transition(records: &[SweepRecord], n: u32) -> Result<TransitionEstimate> {
    if n < 1 {
        return Err(Error::InvalidParams {
            field: "n",
            reason: "the order parameter vanishes identically at n = 0".into(),
        });
    }
    if records.len() < 2 {
        return Err(Error::NotBracketed);
    }
    let spacing = records[1].b_field - records[0].b_field;
    let half_width = spacing / 2.0;
    for pair in records.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let va = lz_at(a, n).ok_or(Error::NotBracketed)?;
        let vb = lz_at(b, n).ok_or(Error::NotBracketed)?;
        if !va.defined {
            return Ok(TransitionEstimate {
                b_field: a.b_field,
                half_width,
            });
        }
        if !vb.defined {
            return Ok(TransitionEstimate {
                b_field: b.b_field,
                half_width,
            });
        }
        if va.value < 0.0 && vb.value > 0.0 {
            return Ok(TransitionEstimate {
                b_field: (a.b_field + b.b_field) / 2.0,
                half_width,
            });
        }
    }
    Err(Error::NotBracketed)
}
