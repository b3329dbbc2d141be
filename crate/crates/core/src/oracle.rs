//! Independent numerical verification of the closed-form spectra.
//!
//! The full first-order Hamiltonian is assembled on the truncated Fock
//! basis, in units of `mc²` and dimensionless quadratures scaled by a
//! reference width `Δ_ref`:
//!
//! `H/mc² = α (σ_x P_x + σ_y P_y) + β (σ_x Y − σ_y X) + σ_z`
//!
//! with `α = ħ/(m c Δ_ref)` and `β = (ω − ω̃) Δ_ref / c`. The product
//! `αβ = r_ω (1 − b)` is independent of `Δ_ref`, which is why the spectrum
//! is gauge-of-basis invariant. The linear potential and the vector
//! potential enter only through the combination `ω − ω̃`, so at the critical
//! field `β = 0` and the Hamiltonian is that of a free particle.
//!
//! Complex Hermitian diagonalization is realized by embedding the n×n
//! Hermitian matrix into the 2n×2n real symmetric block form
//! `[[Re, −Im], [Im, Re]]`; every eigenvalue appears twice and the doubled
//! pairs are deduplicated into a complex eigenbasis.
//!
//! Truncation produces spurious eigenvalues pinned at `∓mc²` by top-shell
//! states whose raising partner was cut. They are detected by their
//! eigenvector weight on the top two quanta shells and excluded from the
//! reported spectrum (kept visible as artifact counts).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{self, FockBasis, OperatorMatrix, Spin};
use crate::linalg;
use crate::params::{classify, Branch, PhysicalParams, Regime};
use crate::spectra::{self, Chirality};

/// Default total-quanta cutoff (dim 650).
pub const DEFAULT_N_MAX: u32 = 24;
/// Eigenvalue clustering tolerance for multiplicity grouping, in `mc²`.
pub const CLUSTER_TOL: f64 = 1e-8;
/// A level is trusted when it shifts less than this between `N_max` and
/// `N_max/2`, in `mc²`.
pub const TRUST_TOL: f64 = 1e-8;
/// Residual gate `‖Hv − λv‖ ≤ tol·‖H‖` for kept levels.
pub const RESIDUAL_REL_TOL: f64 = 1e-9;
/// Eigenvector orthonormality gate.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Eigenvectors with more weight than this on the top two quanta shells are
/// truncation artifacts.
pub const ARTIFACT_WEIGHT_TOL: f64 = 1e-6;
/// `|1 − b|` below which oracle verdicts are informational only: level
/// spacing collapses below the clustering resolution there.
pub const NEAR_CRITICAL_EXCLUSION: f64 = 1e-3;
/// Default relative tolerance for analytic/numeric level matching.
pub const DEFAULT_MATCH_TOL: f64 = 1e-8;

/// Dimensionless couplings of the internal Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// Kinetic scale `α = ħ/(m c Δ_ref)`.
    pub alpha: f64,
    /// Potential scale `β = (ω − ω̃) Δ_ref / c`; zero at the critical field,
    /// negative in the right phase.
    pub beta: f64,
}

/// Default reference width: the phase-adapted `√(ħ/(m|ω − ω̃|))`, in which
/// the eigenstate towers are exact finite vectors of the truncated basis
/// (no squeezed tails leaking into the top shells). Falls back to the bare
/// oscillator width at the critical field, where the net frequency vanishes.
pub fn adapted_width(params: &PhysicalParams) -> f64 {
    let omega_net = (params.omega - params.e * params.b_field / (2.0 * params.m)).abs();
    if omega_net > 0.0 {
        (params.hbar / (params.m * omega_net)).sqrt()
    } else {
        params.oscillator_width()
    }
}

impl Couplings {
    /// Couplings for the given parameters and reference width
    /// (`None` picks the phase-adapted width, see [`adapted_width`]).
    pub fn from_params(params: &PhysicalParams, delta_ref: Option<f64>) -> Self {
        let delta = delta_ref.unwrap_or_else(|| adapted_width(params));
        let omega_net = params.omega - params.e * params.b_field / (2.0 * params.m);
        Self {
            alpha: params.hbar / (params.m * params.c * delta),
            beta: omega_net * delta / params.c,
        }
    }

    /// Free particle: no potential at all.
    pub fn free(alpha: f64) -> Self {
        Self { alpha, beta: 0.0 }
    }
}

/// Index map flipping the spinor component of each basis state.
fn spin_flip(basis: &FockBasis) -> Vec<usize> {
    basis
        .states()
        .iter()
        .map(|s| {
            let other = match s.spin {
                Spin::Up => Spin::Down,
                Spin::Down => Spin::Up,
            };
            basis
                .index_of(s.n_x, s.n_y, other)
                .expect("spin partner exists")
        })
        .collect()
}

/// `σ_x M` for a spin-diagonal mode operator `M`: a row permutation.
fn sigma_x_times(basis: &FockBasis, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let flip = spin_flip(basis);
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(flip[i], j)])
}

/// `σ_y M`: row permutation with spin-dependent phase `∓i`.
fn sigma_y_times(basis: &FockBasis, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let flip = spin_flip(basis);
    let states = basis.states();
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let phase = match states[i].spin {
            Spin::Up => Complex64::new(0.0, -1.0),
            Spin::Down => Complex64::new(0.0, 1.0),
        };
        phase * m[(flip[i], j)]
    })
}

/// Assemble the Hamiltonian for explicit couplings, in units of `mc²`.
pub fn build_hamiltonian(couplings: Couplings, basis: &FockBasis) -> Result<OperatorMatrix> {
    let quad = fock::position_momentum_ops(basis, 1.0, 1.0)?;
    let a = Complex64::new(couplings.alpha, 0.0);
    let b = Complex64::new(couplings.beta, 0.0);
    // spin-diagonal mode parts of the two Pauli channels
    let ch_x = quad.p_x.matrix() * a + quad.y.matrix() * b;
    let ch_y = quad.p_y.matrix() * a - quad.x.matrix() * b;
    let h =
        sigma_x_times(basis, &ch_x) + sigma_y_times(basis, &ch_y) + fock::sigma_z(basis).matrix();
    OperatorMatrix::hermitian(h)
}

/// Assemble the Dirac Hamiltonian for physical parameters, in units of `mc²`.
pub fn build_dirac_hamiltonian(
    params: &PhysicalParams,
    basis: &FockBasis,
    delta_ref: Option<f64>,
) -> Result<OperatorMatrix> {
    build_hamiltonian(Couplings::from_params(params, delta_ref), basis)
}

/// Eigendecomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub dim: usize,
    /// Real spectrum in ascending order (units `mc²` for Hamiltonians).
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector columns matching `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
}

fn embed_real(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = h[(i, j)];
            a[(i, j)] = z.re;
            a[(i + n, j + n)] = z.re;
            a[(i, j + n)] = -z.im;
            a[(i + n, j)] = z.im;
        }
    }
    a
}

/// Pick `keep` complex vectors spanning the image of a doubled eigenvalue
/// group, by pivoted modified Gram-Schmidt.
fn dedupe_group(
    mut candidates: Vec<DVector<Complex64>>,
    keep: usize,
) -> Result<Vec<DVector<Complex64>>> {
    let mut kept: Vec<DVector<Complex64>> = Vec::with_capacity(keep);
    for _ in 0..keep {
        let (best, norm) = candidates
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Convergence("empty deduplication group".into()))?;
        if norm < 0.1 {
            return Err(Error::Convergence(format!(
                "degenerate group rank deficient: residual norm {norm:.3e}"
            )));
        }
        let mut v = candidates.swap_remove(best);
        // re-orthogonalize against the kept set before normalizing; a single
        // MGS pass is not enough to hold the 1e-10 orthonormality gate on
        // large degenerate groups
        for k in &kept {
            let overlap = k.dotc(&v);
            v -= k * overlap;
        }
        let norm = v.norm();
        if norm < 0.05 {
            return Err(Error::Convergence(format!(
                "degenerate group rank collapsed during re-orthogonalization: {norm:.3e}"
            )));
        }
        let v = v / Complex64::new(norm, 0.0);
        for c in candidates.iter_mut() {
            let overlap = v.dotc(c);
            *c -= &v * overlap;
        }
        kept.push(v);
    }
    for c in &candidates {
        if c.norm() > 1e-3 {
            return Err(Error::Convergence(format!(
                "doubled-spectrum deduplication left residual {:.3e}",
                c.norm()
            )));
        }
    }
    Ok(kept)
}

/// In-place modified Gram-Schmidt with re-orthogonalization over the columns
/// of an already nearly orthonormal matrix.
fn orthonormalize_columns(m: &mut DMatrix<Complex64>) -> Result<()> {
    let n = m.ncols();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let overlap = m.column(i).dotc(&m.column(j));
                let prev = m.column(i).clone_owned();
                let mut col = m.column_mut(j);
                col -= prev * overlap;
            }
        }
        let norm = m.column(j).norm();
        if norm < 0.5 {
            return Err(Error::Convergence(format!(
                "eigenvector column {j} collapsed during orthonormalization"
            )));
        }
        let mut col = m.column_mut(j);
        col /= Complex64::new(norm, 0.0);
    }
    Ok(())
}

/// Full spectrum of a Hermitian-flagged operator via the real symmetric
/// embedding, with residual and orthonormality gates.
pub fn hermitian_eigensolve(m: &OperatorMatrix) -> Result<EigenDecomposition> {
    if !m.is_hermitian_flagged() {
        return Err(Error::Assembly(
            "eigensolve requires a Hermitian-flagged operator".into(),
        ));
    }
    let n = m.dim();
    let (real_vals, real_vecs) = linalg::symmetric_eigen(&embed_real(m.matrix()))?;
    let scale = real_vals
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    // must exceed the solver's eigenvalue jitter within a degenerate group
    // (splitting a group breaks complex orthogonality across the split) while
    // staying below the physical level spacing
    let pair_tol = 1e-9 * scale;

    let mut eigenvalues = Vec::with_capacity(n);
    let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && real_vals[end] - real_vals[end - 1] <= pair_tol {
            end += 1;
        }
        let group = end - start;
        if group % 2 != 0 {
            return Err(Error::Convergence(format!(
                "embedded spectrum group of odd size {group} near {}",
                real_vals[start]
            )));
        }
        let mean = real_vals[start..end].iter().sum::<f64>() / group as f64;
        let candidates: Vec<DVector<Complex64>> = (start..end)
            .map(|col| {
                DVector::from_fn(n, |i, _| {
                    Complex64::new(real_vecs[(i, col)], real_vecs[(i + n, col)])
                })
            })
            .collect();
        for v in dedupe_group(candidates, group / 2)? {
            eigenvalues.push(mean);
            columns.push(v);
        }
        start = end;
    }
    if eigenvalues.len() != n {
        return Err(Error::Convergence(format!(
            "deduplication produced {} levels for dimension {n}",
            eigenvalues.len()
        )));
    }

    let mut eigenvectors = DMatrix::zeros(n, n);
    for (j, v) in columns.iter().enumerate() {
        eigenvectors.set_column(j, v);
    }
    // The real solver controls real orthogonality, but complex orthogonality
    // between *nearly* degenerate groups (gap g) only holds to ~eps·‖H‖/g.
    // One global MGS sweep removes that; the induced mixing is ~eps·‖H‖/g
    // toward levels a distance g away, so residuals stay at machine level.
    orthonormalize_columns(&mut eigenvectors)?;

    // orthonormality gate
    let gram = eigenvectors.adjoint() * &eigenvectors;
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    if defect > ORTHONORMALITY_TOL {
        return Err(Error::Convergence(format!(
            "orthonormality defect {defect:.3e} exceeds gate"
        )));
    }

    // residual gate over all kept levels
    let hv = m.matrix() * &eigenvectors;
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let residual = (hv.column(j) - eigenvectors.column(j) * Complex64::new(lambda, 0.0)).norm();
        if residual > RESIDUAL_REL_TOL * scale {
            return Err(Error::Convergence(format!(
                "residual {residual:.3e} at level {j} exceeds gate"
            )));
        }
    }

    Ok(EigenDecomposition {
        dim: n,
        eigenvalues,
        eigenvectors,
    })
}

/// One distinct numeric level with its observed multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct ClusteredLevel {
    /// Cluster mean energy (units `mc²`).
    pub energy: f64,
    /// Physical multiplicity: cluster directions clean of the top two quanta
    /// shells (truncation-limited, informational).
    pub multiplicity: usize,
    /// Cluster directions contaminated by the top two shells.
    pub artifact_rank: usize,
    /// Orthonormal basis of the physical part of the cluster subspace,
    /// `dim × multiplicity`.
    #[serde(skip)]
    pub vectors: DMatrix<Complex64>,
}

/// Distinct physical levels on both sides of the spectrum, ordered outward
/// from the spectrum center (ascending `|E|`).
#[derive(Debug, Clone, Serialize)]
pub struct NumericSpectrum {
    pub positive: Vec<ClusteredLevel>,
    pub negative: Vec<ClusteredLevel>,
    /// Number of truncation-artifact eigenvectors excluded from the lists.
    pub artifact_count: usize,
}

/// A diagonalized truncated system with its clustered, artifact-resolved
/// spectrum.
pub struct SystemDecomposition {
    pub basis: FockBasis,
    pub decomp: EigenDecomposition,
    /// All distinct levels in ascending energy, including pure-artifact
    /// clusters (multiplicity 0).
    pub clusters: Vec<ClusteredLevel>,
    /// Total number of truncation-artifact directions across all clusters.
    pub artifact_count: usize,
}

/// Resolve one degenerate cluster into physical and truncation-artifact
/// directions.
///
/// Individual eigenvectors returned by the solver mix the degenerate
/// subspace arbitrarily, so per-vector weights are meaningless; instead the
/// top-two-shell weight operator is diagonalized *within* the cluster
/// subspace. Its eigenvalues are the shell weights of an invariant basis:
/// near 0 for physical tower states, near 1 for states whose raising
/// partner was truncated away.
fn analyze_cluster(
    basis: &FockBasis,
    decomp: &EigenDecomposition,
    members: &[usize],
    energy: f64,
) -> Result<ClusteredLevel> {
    let n = decomp.dim;
    let k = members.len();
    let mut v = DMatrix::zeros(n, k);
    for (col, &idx) in members.iter().enumerate() {
        v.set_column(col, &decomp.eigenvectors.column(idx));
    }
    // D·V with D the diagonal indicator of the top two quanta shells
    let cutoff = basis.n_max().saturating_sub(1);
    let mut dv = v.clone();
    for (i, s) in basis.states().iter().enumerate() {
        if s.quanta() < cutoff {
            dv.row_mut(i).fill(Complex64::new(0.0, 0.0));
        }
    }
    let gram = v.adjoint() * dv;
    let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let weights =
        hermitian_eigensolve(&OperatorMatrix::hermitian(gram).map_err(|e| {
            Error::Convergence(format!("cluster weight operator not Hermitian: {e}"))
        })?)?;
    let physical_cols: Vec<usize> = (0..k)
        .filter(|&j| weights.eigenvalues[j] <= ARTIFACT_WEIGHT_TOL)
        .collect();
    let mut vectors = DMatrix::zeros(n, physical_cols.len());
    for (out, &j) in physical_cols.iter().enumerate() {
        vectors.set_column(out, &(&v * weights.eigenvectors.column(j)));
    }
    Ok(ClusteredLevel {
        energy,
        multiplicity: physical_cols.len(),
        artifact_rank: k - physical_cols.len(),
        vectors,
    })
}

/// Diagonalize the Hamiltonian for the given couplings and cutoff, cluster
/// the spectrum at [`CLUSTER_TOL`], and resolve truncation artifacts.
pub fn diagonalize_system(couplings: Couplings, n_max: u32) -> Result<SystemDecomposition> {
    let basis = FockBasis::new(n_max);
    let h = build_hamiltonian(couplings, &basis)?;
    let decomp = hermitian_eigensolve(&h)?;

    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (col, &e) in decomp.eigenvalues.iter().enumerate() {
        match groups.last_mut() {
            Some((energy, members)) if (e - *energy).abs() <= CLUSTER_TOL => {
                let k = members.len() as f64;
                *energy = (*energy * k + e) / (k + 1.0);
                members.push(col);
            }
            _ => groups.push((e, vec![col])),
        }
    }
    let mut clusters = Vec::with_capacity(groups.len());
    let mut artifact_count = 0;
    for (energy, members) in groups {
        let cluster = analyze_cluster(&basis, &decomp, &members, energy)?;
        artifact_count += cluster.artifact_rank;
        clusters.push(cluster);
    }
    Ok(SystemDecomposition {
        basis,
        decomp,
        clusters,
        artifact_count,
    })
}

impl SystemDecomposition {
    /// Physical levels split around zero, each side ordered outward by `|E|`.
    pub fn clustered(&self) -> NumericSpectrum {
        let (negative, positive): (Vec<_>, Vec<_>) = self
            .clusters
            .iter()
            .filter(|c| c.multiplicity > 0)
            .cloned()
            .partition(|c| c.energy < 0.0);
        let mut negative = negative;
        negative.reverse(); // ascending |E|
        NumericSpectrum {
            positive,
            negative,
            artifact_count: self.artifact_count,
        }
    }
}

/// How many distinct levels per side survive the truncation-convergence
/// comparison between `N_max` and `N_max/2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrustWindow {
    pub positive: usize,
    pub negative: usize,
}

fn trusted_count(fine: &[ClusteredLevel], coarse: &[ClusteredLevel]) -> usize {
    fine.iter()
        .zip(coarse.iter())
        .take_while(|(f, c)| (f.energy - c.energy).abs() < TRUST_TOL)
        .count()
}

/// Convergence check on explicit couplings.
pub fn convergence_check_couplings(couplings: Couplings, n_max: u32) -> Result<TrustWindow> {
    if n_max < 8 {
        return Err(Error::InvalidParams {
            field: "n_max",
            reason: format!("convergence check needs N_max >= 8, got {n_max}"),
        });
    }
    let fine = diagonalize_system(couplings, n_max)?.clustered();
    let coarse = diagonalize_system(couplings, n_max / 2)?.clustered();
    Ok(TrustWindow {
        positive: trusted_count(&fine.positive, &coarse.positive),
        negative: trusted_count(&fine.negative, &coarse.negative),
    })
}

/// Count the contiguous trusted levels from the spectrum center by comparing
/// truncations `N_max` and `N_max/2`.
pub fn convergence_check(params: &PhysicalParams, n_max: u32) -> Result<TrustWindow> {
    convergence_check_couplings(Couplings::from_params(params, None), n_max)
}

/// Distinct numeric levels nearest `±mc²`, `window` per side, all within the
/// established trust window.
pub fn numeric_spectrum(
    params: &PhysicalParams,
    n_max: u32,
    window: usize,
) -> Result<NumericSpectrum> {
    let couplings = Couplings::from_params(params, None);
    let trust = convergence_check_couplings(couplings, n_max)?;
    if trust.positive < window || trust.negative < window {
        return Err(Error::Truncation(format!(
            "requested window {window} exceeds trust window (+{}, -{}) at N_max={n_max}",
            trust.positive, trust.negative
        )));
    }
    let mut spectrum = diagonalize_system(couplings, n_max)?.clustered();
    spectrum.positive.truncate(window);
    spectrum.negative.truncate(window);
    Ok(spectrum)
}

/// Orbital angular momentum multiset of a degenerate energy cluster, in
/// units of `ħ`.
///
/// The total angular momentum `J_z = L_z + (ħ/2)σ_z` commutes with the
/// truncated Hamiltonian exactly, so the cluster subspace is resolved by
/// diagonalizing the projected `J_z`; each eigenvalue is a half-integer.
/// The reported `L_z` values are those of the dominant spinor component of
/// each tower — upper for positive-energy clusters (`j − ħ/2`), lower for
/// negative-energy ones (`j + ħ/2`) — which is the convention the
/// closed-form expectation values use. The analytic value is the minimal
/// member of the multiset in the left phase and the maximal member in the
/// right phase (the remaining members add chirality-neutral quanta).
pub fn numeric_lz(
    basis: &FockBasis,
    level: &ClusteredLevel,
    chirality: Chirality,
) -> Result<Vec<f64>> {
    let k = level.multiplicity;
    if k == 0 {
        return Ok(Vec::new());
    }
    let ops = fock::number_and_angular_ops(basis, 1.0, 1.0)?;
    let j_z = ops.l_z.matrix() + fock::sigma_z(basis).matrix() * Complex64::new(0.5, 0.0);

    let v = &level.vectors;
    let projected = v.adjoint() * (&j_z * v);
    // symmetrize away projection round-off before the gate
    let projected = (&projected + projected.adjoint()) * Complex64::new(0.5, 0.0);
    let small = OperatorMatrix::hermitian(projected)
        .map_err(|_| Error::Degeneracy("projected J_z is not Hermitian on the cluster".into()))?;
    let j_values = hermitian_eigensolve(&small)?.eigenvalues;

    if chirality == Chirality::Undefined {
        return Err(Error::Degeneracy(
            "angular momentum towers are undefined at the critical point".into(),
        ));
    }
    let shift = if level.energy > 0.0 { -0.5 } else { 0.5 };
    let mut lz = Vec::with_capacity(k);
    for j in j_values {
        let nearest_half = (2.0 * j).round() / 2.0;
        if (j - nearest_half).abs() > 1e-6 {
            return Err(Error::Degeneracy(format!(
                "projected J_z eigenvalue {j} is not a half-integer; cluster mixes towers"
            )));
        }
        lz.push(nearest_half + shift);
    }
    lz.sort_by(f64::total_cmp);
    Ok(lz)
}

/// One matched analytic/numeric level pair.
#[derive(Debug, Clone, Serialize)]
pub struct LevelMatch {
    pub analytic: f64,
    pub numeric: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub multiplicity: usize,
}

/// Outcome of matching an analytic level list against numeric clusters.
#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub tolerance: f64,
    pub matched: Vec<LevelMatch>,
    /// Analytic levels whose nearest numeric candidate missed the tolerance.
    pub failed: Vec<LevelMatch>,
    /// Numeric levels not consumed by any analytic level (truncation
    /// artifacts or levels beyond the analytic window).
    pub unmatched_numeric: Vec<f64>,
    pub pass: bool,
}

/// Greedy nearest matching of distinct analytic values against numeric
/// clusters. Multiplicities are reported but never asserted. An empty
/// analytic list passes vacuously.
pub fn match_spectra(analytic: &[f64], numeric: &[ClusteredLevel], rel_tol: f64) -> MatchReport {
    let mut used = vec![false; numeric.len()];
    let mut matched = Vec::new();
    let mut failed = Vec::new();
    for &a in analytic {
        let candidate = numeric
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|(_, x), (_, y)| (x.energy - a).abs().total_cmp(&(y.energy - a).abs()));
        match candidate {
            Some((i, cluster)) => {
                let abs_error = (cluster.energy - a).abs();
                let rel_error = abs_error / a.abs().max(1.0);
                let entry = LevelMatch {
                    analytic: a,
                    numeric: cluster.energy,
                    abs_error,
                    rel_error,
                    multiplicity: cluster.multiplicity,
                };
                if rel_error <= rel_tol {
                    used[i] = true;
                    matched.push(entry);
                } else {
                    failed.push(entry);
                }
            }
            None => failed.push(LevelMatch {
                analytic: a,
                numeric: f64::NAN,
                abs_error: f64::INFINITY,
                rel_error: f64::INFINITY,
                multiplicity: 0,
            }),
        }
    }
    let unmatched_numeric = numeric
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(c, _)| c.energy)
        .collect();
    let pass = failed.is_empty();
    MatchReport {
        tolerance: rel_tol,
        matched,
        failed,
        unmatched_numeric,
        pass,
    }
}

/// Presence/absence of the `±mc²` zero mode, which decides the branch
/// convention empirically: the zero mode sits at `+mc²` in the left phase
/// and at `−mc²` in the right phase.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroModeCheck {
    /// `+1` when the zero mode is expected at `+mc²`, `−1` at `−mc²`.
    pub expected_sign: i8,
    pub expected_found: bool,
    pub counterpart_absent: bool,
    pub pass: bool,
}

fn has_level(levels: &[ClusteredLevel], energy: f64) -> bool {
    levels
        .iter()
        .any(|c| (c.energy - energy).abs() <= CLUSTER_TOL)
}

/// Overall oracle verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Near-critical fields are excluded from pass/fail: level spacing
    /// collapses below the clustering resolution.
    Informational,
}

/// Full analytic-vs-numeric comparison at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub omega: f64,
    pub b_field: f64,
    pub b_ratio: f64,
    pub regime: String,
    pub n_max: u32,
    pub window: usize,
    pub trust: TrustWindow,
    pub artifact_count: usize,
    pub positive: MatchReport,
    pub negative: MatchReport,
    pub zero_mode: ZeroModeCheck,
    pub verdict: Verdict,
}

/// Analytic level list for the regime, `window` distinct values per branch.
fn analytic_levels(params: &PhysicalParams, window: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let regime = classify(params);
    let mut positive = Vec::with_capacity(window);
    let mut negative = Vec::with_capacity(window);
    for n in 0..window as u32 {
        let (p, m) = match regime {
            Regime::RightPhase => (
                spectra::right_energy_rel(n, Branch::Positive, params)?,
                spectra::right_energy_rel(n, Branch::Negative, params)?,
            ),
            _ => (
                spectra::left_energy_rel(n, Branch::Positive, params)?,
                spectra::left_energy_rel(n, Branch::Negative, params)?,
            ),
        };
        positive.push(p);
        negative.push(m);
    }
    Ok((positive, negative))
}

/// Run the complete oracle: build, diagonalize, establish trust, and match
/// the analytic spectra, including the zero-mode branch placement.
pub fn oracle_report(params: &PhysicalParams, n_max: u32, window: usize) -> Result<OracleReport> {
    let couplings = Couplings::from_params(params, None);
    let trust = convergence_check_couplings(couplings, n_max)?;
    if trust.positive < window || trust.negative < window {
        return Err(Error::Truncation(format!(
            "requested window {window} exceeds trust window (+{}, -{}) at N_max={n_max}",
            trust.positive, trust.negative
        )));
    }
    let system = diagonalize_system(couplings, n_max)?;
    let mut spectrum = system.clustered();
    spectrum.positive.truncate(window);
    spectrum.negative.truncate(window);

    let (analytic_pos, analytic_neg) = analytic_levels(params, window)?;
    let positive = match_spectra(&analytic_pos, &spectrum.positive, DEFAULT_MATCH_TOL);
    let negative = match_spectra(&analytic_neg, &spectrum.negative, DEFAULT_MATCH_TOL);

    let regime = classify(params);
    let expected_sign: i8 = if regime == Regime::RightPhase { -1 } else { 1 };
    let (expect_side, other_side) = if expected_sign > 0 {
        (&spectrum.positive, &spectrum.negative)
    } else {
        (&spectrum.negative, &spectrum.positive)
    };
    let expected_found = has_level(expect_side, expected_sign as f64);
    let counterpart_absent = !has_level(other_side, -expected_sign as f64);
    let zero_mode = ZeroModeCheck {
        expected_sign,
        expected_found,
        counterpart_absent,
        pass: expected_found && counterpart_absent,
    };

    let b_ratio = params.b_ratio();
    let verdict = if (1.0 - b_ratio).abs() < NEAR_CRITICAL_EXCLUSION {
        Verdict::Informational
    } else if positive.pass && negative.pass && zero_mode.pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    Ok(OracleReport {
        omega: params.omega,
        b_field: params.b_field,
        b_ratio,
        regime: regime.to_string(),
        n_max,
        window,
        trust,
        artifact_count: spectrum.artifact_count,
        positive,
        negative,
        zero_mode,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::max_abs;

    const SQRT5: f64 = 2.23606797749979;

    #[test]
    fn eigensolve_two_by_two() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0, 0.0);
        let d = hermitian_eigensolve(&OperatorMatrix::hermitian(m).unwrap()).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-13);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn eigensolve_diagonal() {
        let m = DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Complex64::new([2.0, -1.0, 0.5][i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let d = hermitian_eigensolve(&OperatorMatrix::hermitian(m).unwrap()).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-13);
        assert!((d.eigenvalues[1] - 0.5).abs() < 1e-13);
        assert!((d.eigenvalues[2] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn eigensolve_genuinely_complex() {
        // [[1, i], [-i, 1]] has eigenvalues {0, 2}
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        let d = hermitian_eigensolve(&OperatorMatrix::hermitian(m).unwrap()).unwrap();
        assert!(d.eigenvalues[0].abs() < 1e-13);
        assert!((d.eigenvalues[1] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn eigensolve_rejects_unflagged() {
        let m = OperatorMatrix::new(DMatrix::zeros(2, 2));
        assert!(matches!(hermitian_eigensolve(&m), Err(Error::Assembly(_))));
    }

    #[test]
    fn lz_eigenvalue_multiset() {
        // On the Q <= 2 basis, L_z per spinor component has eigenvalues
        // {-2,-1,0,0,1,2}; the full basis doubles each.
        let basis = FockBasis::new(2);
        let ops = fock::number_and_angular_ops(&basis, 1.0, 1.0).unwrap();
        let d = hermitian_eigensolve(&ops.l_z).unwrap();
        let expected = [
            -2.0, -2.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 2.0,
        ];
        assert_eq!(d.eigenvalues.len(), expected.len());
        for (got, want) in d.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn free_hamiltonian_squares_to_dispersion() {
        let basis = FockBasis::new(8);
        let h = build_hamiltonian(Couplings::free(1.0), &basis).unwrap();
        let quad = fock::position_momentum_ops(&basis, 1.0, 1.0).unwrap();
        let p2 = quad.p_x.matrix() * quad.p_x.matrix() + quad.p_y.matrix() * quad.p_y.matrix();
        let expect = p2 + DMatrix::identity(basis.dim(), basis.dim());
        let h2 = h.matrix() * h.matrix();
        let keep = basis.indices_upto_quanta(basis.n_max() - 2);
        let diff = OperatorMatrix::new(h2 - expect).restrict(&keep);
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn critical_field_cancels_potential() {
        // At B = B_c the net linear potential vanishes identically.
        let params = PhysicalParams::natural(1.0, 2.0).unwrap();
        let c = Couplings::from_params(&params, None);
        assert_eq!(c.beta, 0.0);
        let basis = FockBasis::new(8);
        let h = build_dirac_hamiltonian(&params, &basis, None).unwrap();
        let quad = fock::position_momentum_ops(&basis, 1.0, 1.0).unwrap();
        let p2 = (quad.p_x.matrix() * quad.p_x.matrix() + quad.p_y.matrix() * quad.p_y.matrix())
            * Complex64::new(c.alpha * c.alpha, 0.0);
        let expect = p2 + DMatrix::identity(basis.dim(), basis.dim());
        let h2 = h.matrix() * h.matrix();
        let keep = basis.indices_upto_quanta(basis.n_max() - 2);
        let diff = OperatorMatrix::new(h2 - expect).restrict(&keep);
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn oscillator_zero_mode_at_rest_energy() {
        let params = PhysicalParams::natural(1.0, 0.0).unwrap();
        let basis = FockBasis::new(12);
        let h = build_dirac_hamiltonian(&params, &basis, None).unwrap();
        let d = hermitian_eigensolve(&h).unwrap();
        let lowest_positive = d
            .eigenvalues
            .iter()
            .copied()
            .filter(|&e| e > 0.0)
            .fold(f64::INFINITY, f64::min);
        assert!((lowest_positive - 1.0).abs() < 1e-9);
    }

    #[test]
    fn numeric_spectrum_oscillator_levels() {
        let params = PhysicalParams::natural(1.0, 0.0).unwrap();
        let spec = numeric_spectrum(&params, 16, 4).unwrap();
        let expected_pos = [1.0, SQRT5, 3.0, 13f64.sqrt()];
        for (c, want) in spec.positive.iter().zip(expected_pos) {
            assert!((c.energy - want).abs() < 1e-9, "{} vs {want}", c.energy);
        }
        // negative branch starts at -sqrt(5): no -1 level in the left phase
        let expected_neg = [-SQRT5, -3.0, -13f64.sqrt(), -17f64.sqrt()];
        for (c, want) in spec.negative.iter().zip(expected_neg) {
            assert!((c.energy - want).abs() < 1e-9, "{} vs {want}", c.energy);
        }
    }

    #[test]
    fn numeric_spectrum_right_phase_levels() {
        let params = PhysicalParams::natural(1.0, 4.0).unwrap();
        let spec = numeric_spectrum(&params, 16, 3).unwrap();
        let expected_neg = [-1.0, -SQRT5, -3.0];
        for (c, want) in spec.negative.iter().zip(expected_neg) {
            assert!((c.energy - want).abs() < 1e-9, "{} vs {want}", c.energy);
        }
        let expected_pos = [SQRT5, 3.0, 13f64.sqrt()];
        for (c, want) in spec.positive.iter().zip(expected_pos) {
            assert!((c.energy - want).abs() < 1e-9, "{} vs {want}", c.energy);
        }
    }

    #[test]
    fn numeric_lz_clusters() {
        let params = PhysicalParams::natural(1.0, 0.0).unwrap();
        let system = diagonalize_system(Couplings::from_params(&params, None), 12).unwrap();
        let spec = system.clustered();

        // ground multiplet at E = +1 contains lz = 0
        let ground = &spec.positive[0];
        assert!((ground.energy - 1.0).abs() < 1e-9);
        let lz = numeric_lz(&system.basis, ground, Chirality::Left).unwrap();
        assert!(lz.iter().any(|v| v.abs() < 1e-9));
        // tower representative is the minimal member in the left phase
        assert!((lz[0] - 0.0).abs() < 1e-9);

        // cluster at E = +sqrt(5) (n_l = 1) contains lz = -1 as its minimum
        let first = &spec.positive[1];
        assert!((first.energy - SQRT5).abs() < 1e-9);
        let lz = numeric_lz(&system.basis, first, Chirality::Left).unwrap();
        assert!((lz[0] + 1.0).abs() < 1e-9, "min lz {}", lz[0]);
    }

    #[test]
    fn numeric_lz_right_phase() {
        let params = PhysicalParams::natural(1.0, 4.0).unwrap();
        let system = diagonalize_system(Couplings::from_params(&params, None), 12).unwrap();
        let spec = system.clustered();
        // cluster at E = -sqrt(5) (n_r = 1): maximal member has lz = +1
        let c = &spec.negative[1];
        assert!((c.energy + SQRT5).abs() < 1e-9);
        let lz = numeric_lz(&system.basis, c, Chirality::Right).unwrap();
        assert!(
            (lz[lz.len() - 1] - 1.0).abs() < 1e-9,
            "max lz {:?}",
            lz.last()
        );
    }

    #[test]
    fn convergence_free_particle_has_no_discrete_levels() {
        let trust = convergence_check_couplings(Couplings::free(1.0), 16).unwrap();
        assert!(trust.positive <= 1, "trusted {}", trust.positive);
        assert!(trust.negative <= 1, "trusted {}", trust.negative);
    }

    #[test]
    fn convergence_check_requires_minimum_cutoff() {
        let params = PhysicalParams::natural(1.0, 0.0).unwrap();
        assert!(convergence_check(&params, 6).is_err());
    }

    #[test]
    fn truncation_error_when_window_too_large() {
        let params = PhysicalParams::natural(1.0, 0.0).unwrap();
        assert!(matches!(
            numeric_spectrum(&params, 8, 40),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn match_spectra_examples() {
        let mk = |e: f64| ClusteredLevel {
            energy: e,
            multiplicity: 1,
            artifact_rank: 0,
            vectors: DMatrix::zeros(0, 0),
        };
        let numeric = [mk(1.0), mk(2.2360680), mk(3.0000000)];
        let report = match_spectra(&[1.0, SQRT5, 3.0], &numeric, 1e-6);
        assert!(report.pass);
        assert!(report.unmatched_numeric.is_empty());

        let numeric = [mk(1.0), mk(2.30)];
        let report = match_spectra(&[1.0, SQRT5], &numeric, 1e-8);
        assert!(!report.pass);
        assert_eq!(report.failed.len(), 1);
        assert!((report.failed[0].abs_error - 0.064).abs() < 1e-3);

        let report = match_spectra(&[], &numeric, 1e-8);
        assert!(report.pass);
        assert_eq!(report.unmatched_numeric.len(), 2);
    }

    #[test]
    fn oracle_report_left_phase_smoke() {
        let params = PhysicalParams::natural(1.0, 1.0).unwrap();
        let report = oracle_report(&params, 16, 4).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.zero_mode.expected_sign, 1);
        assert!(report.zero_mode.pass);
    }
}
