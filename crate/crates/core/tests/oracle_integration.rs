//! Cross-checks between the analytic order parameter and the numeric
//! angular-momentum structure, and basis-width invariance of the spectrum.

use chiralosc::oracle::{self, adapted_width, Couplings};
use chiralosc::params::Branch;
use chiralosc::params::PhysicalParams;
use chiralosc::phase;
use chiralosc::spectra::{Chirality, Frame};

const N_MAX: u32 = 12;

/// The analytic `⟨L_z⟩` is a member — and the extremal member — of the
/// numeric `L_z` multiset of the matched energy cluster: minimal in the
/// left phase (towers add `n_r ≥ 0` on top of `−ħ n_l`), maximal in the
/// right phase.
#[test]
fn analytic_lz_is_extremal_member_of_numeric_multiset() {
    for (b_field, chirality) in [
        (0.5, Chirality::Left),
        (1.0, Chirality::Left),
        (3.0, Chirality::Right),
        (4.0, Chirality::Right),
    ] {
        let params = PhysicalParams::natural(1.0, b_field).unwrap();
        let system =
            oracle::diagonalize_system(Couplings::from_params(&params, None), N_MAX).unwrap();
        let spectrum = system.clustered();

        for n in 0..3u32 {
            for branch in [Branch::Positive, Branch::Negative] {
                let analytic_e = match chirality {
                    Chirality::Left => {
                        chiralosc::spectra::left_energy_rel(n, branch, &params).unwrap()
                    }
                    _ => chiralosc::spectra::right_energy_rel(n, branch, &params).unwrap(),
                };
                let side = if analytic_e >= 0.0 {
                    &spectrum.positive
                } else {
                    &spectrum.negative
                };
                let cluster = side
                    .iter()
                    .find(|c| (c.energy - analytic_e).abs() < 1e-8)
                    .unwrap_or_else(|| panic!("no cluster at {analytic_e} for B={b_field}"));
                let lz = oracle::numeric_lz(&system.basis, cluster, chirality).unwrap();
                let analytic_lz = phase::lz_expectation_rel(n, branch, &params).unwrap().value;

                let member = lz.iter().any(|v| (v - analytic_lz).abs() < 1e-9);
                assert!(
                    member,
                    "B={b_field} n={n} {branch:?}: {analytic_lz} not in {lz:?}"
                );
                let extremal = match chirality {
                    Chirality::Left => lz[0],
                    _ => lz[lz.len() - 1],
                };
                assert!(
                    (extremal - analytic_lz).abs() < 1e-9,
                    "B={b_field} n={n} {branch:?}: extremal {extremal} vs analytic {analytic_lz}"
                );
            }
        }
    }
}

/// The numeric spectrum does not depend on the reference width of the basis
/// (α and β change, αβ does not) as long as the truncation has converged.
#[test]
fn spectrum_invariant_under_reference_width_change() {
    let params = PhysicalParams::natural(1.0, 1.0).unwrap();
    let n_max = 20;
    let window = 4;
    let adapted = oracle::numeric_spectrum(&params, n_max, window).unwrap();

    // doubled width: towers acquire squeezed tails, so convergence is only
    // approximate; compare the distinct level values, not multiplicities
    let doubled = Couplings::from_params(&params, Some(2.0 * adapted_width(&params)));
    let system = oracle::diagonalize_system(doubled, n_max).unwrap();
    let spec = system.clustered();
    for (a, b) in adapted.positive.iter().zip(&spec.positive).take(window) {
        assert!(
            (a.energy - b.energy).abs() < 1e-8,
            "positive level {} vs {}",
            a.energy,
            b.energy
        );
    }
    for (a, b) in adapted.negative.iter().zip(&spec.negative).take(window) {
        assert!(
            (a.energy - b.energy).abs() < 1e-8,
            "negative level {} vs {}",
            a.energy,
            b.energy
        );
    }
}

/// Full analytic/numeric/order-parameter consistency on one sweep record.
#[test]
fn sweep_records_match_oracle_clusters() {
    let params = PhysicalParams::natural(1.0, 0.0).unwrap();
    let records = phase::sweep(&params, 0.5, 3.5, 4, 2, Frame::Relativistic).unwrap();
    for record in &records {
        if record.regime == chiralosc::params::Regime::Critical {
            continue;
        }
        let point = PhysicalParams {
            b_field: record.b_field,
            ..params
        };
        let spectrum = oracle::numeric_spectrum(&point, N_MAX, 3).unwrap();
        for level in &record.levels {
            let side = if level.energy >= 0.0 {
                &spectrum.positive
            } else {
                &spectrum.negative
            };
            assert!(
                side.iter().any(|c| (c.energy - level.energy).abs() < 1e-8),
                "B={}: analytic level {} missing numerically",
                record.b_field,
                level.energy
            );
        }
    }
}
