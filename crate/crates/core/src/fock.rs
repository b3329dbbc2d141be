//! Truncated two-mode boson ⊗ spinor basis and the ladder-operator algebra.
//!
//! The basis is truncated by total quanta `Q = n_x + n_y ≤ N_max`. That
//! subspace is invariant under rotations, so the angular momentum
//! `L_z = ħ(N_r − N_l)` is exactly block-preserved and truncation artifacts
//! respect the angular-momentum structure. Per-mode cutoffs would not have
//! this property.
//!
//! Chiral ladder operators: `a_r = (a_x − i a_y)/√2`, `a_l = (a_x + i a_y)/√2`.
//! `a_r†` creates a right quantum of angular momentum (+ħ), `a_l†` a left
//! quantum (−ħ).

use std::collections::HashMap;
use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance of the Hermiticity gate: `max|M − M†| ≤ tol · max|M|`.
pub const HERMITICITY_REL_TOL: f64 = 1e-12;

/// Spinor component: `Up` is the upper component, `Down` the lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

/// One basis state `|n_x, n_y⟩ ⊗ |s⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockState {
    pub n_x: u32,
    pub n_y: u32,
    pub spin: Spin,
}

impl FockState {
    /// Total quanta `Q = n_x + n_y`.
    pub fn quanta(&self) -> u32 {
        self.n_x + self.n_y
    }
}

/// Deterministically enumerated truncated basis with `n_x + n_y ≤ N_max`.
///
/// States are ordered by total quanta `Q`, then `n_x`, then spin, so
/// `dim = (N_max+1)(N_max+2)`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_max: u32,
    states: Vec<FockState>,
    index: HashMap<(u32, u32, Spin), usize>,
}

impl FockBasis {
    pub fn new(n_max: u32) -> Self {
        let mut states = Vec::new();
        for q in 0..=n_max {
            for n_x in 0..=q {
                for spin in [Spin::Up, Spin::Down] {
                    states.push(FockState {
                        n_x,
                        n_y: q - n_x,
                        spin,
                    });
                }
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| ((s.n_x, s.n_y, s.spin), i))
            .collect();
        Self {
            n_max,
            states,
            index,
        }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn index_of(&self, n_x: u32, n_y: u32, spin: Spin) -> Option<usize> {
        self.index.get(&(n_x, n_y, spin)).copied()
    }

    /// Indices of all states with `Q ≤ q_max`, in basis order.
    pub fn indices_upto_quanta(&self, q_max: u32) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.quanta() <= q_max)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Dense complex operator on a [`FockBasis`], optionally Hermitian-gated.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    mat: DMatrix<Complex64>,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Wrap a matrix without any Hermiticity claim.
    pub fn new(mat: DMatrix<Complex64>) -> Self {
        Self {
            mat,
            hermitian: false,
        }
    }

    /// Wrap a matrix that must pass the Hermiticity gate.
    pub fn hermitian(mat: DMatrix<Complex64>) -> Result<Self> {
        let op = Self {
            mat,
            hermitian: true,
        };
        let defect = op.hermiticity_defect();
        let scale = op.max_abs();
        if defect > HERMITICITY_REL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Assembly(format!(
                "Hermiticity gate failed: max|M - M^H| = {defect:.3e}, max|M| = {scale:.3e}"
            )));
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    /// `max_ij |M_ij − conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.mat.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Submatrix on the given basis indices (rows and columns alike).
    pub fn restrict(&self, keep: &[usize]) -> DMatrix<Complex64> {
        DMatrix::from_fn(keep.len(), keep.len(), |i, j| self.mat[(keep[i], keep[j])])
    }
}

impl Deref for OperatorMatrix {
    type Target = DMatrix<Complex64>;

    fn deref(&self) -> &Self::Target {
        &self.mat
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `AB − BA`.
pub fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// Largest entry magnitude of a matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Mode annihilation operators `a_x`, `a_y`: `⟨n−1|a|n⟩ = √n` on the
/// respective mode, identity on the other factors. Annihilation lowers `Q`,
/// so it never leaves the truncated basis.
pub fn ladder_matrices(basis: &FockBasis) -> (OperatorMatrix, OperatorMatrix) {
    let dim = basis.dim();
    let mut a_x = DMatrix::zeros(dim, dim);
    let mut a_y = DMatrix::zeros(dim, dim);
    for (col, s) in basis.states().iter().enumerate() {
        if s.n_x > 0 {
            let row = basis
                .index_of(s.n_x - 1, s.n_y, s.spin)
                .expect("lowered state stays in basis");
            a_x[(row, col)] = real((s.n_x as f64).sqrt());
        }
        if s.n_y > 0 {
            let row = basis
                .index_of(s.n_x, s.n_y - 1, s.spin)
                .expect("lowered state stays in basis");
            a_y[(row, col)] = real((s.n_y as f64).sqrt());
        }
    }
    (OperatorMatrix::new(a_x), OperatorMatrix::new(a_y))
}

/// Chiral annihilation operators `a_r = (a_x − i a_y)/√2`,
/// `a_l = (a_x + i a_y)/√2`.
pub fn chiral_ladders(basis: &FockBasis) -> (OperatorMatrix, OperatorMatrix) {
    let (a_x, a_y) = ladder_matrices(basis);
    let i = Complex64::new(0.0, 1.0);
    let inv_sqrt2 = real(1.0 / 2f64.sqrt());
    let a_r = (a_x.matrix() - a_y.matrix() * i) * inv_sqrt2;
    let a_l = (a_x.matrix() + a_y.matrix() * i) * inv_sqrt2;
    (OperatorMatrix::new(a_r), OperatorMatrix::new(a_l))
}

/// Chiral number operators, angular momentum, and oscillator Hamiltonian.
pub struct ChiralOps {
    /// `N_r = a_r† a_r`.
    pub n_r: OperatorMatrix,
    /// `N_l = a_l† a_l`.
    pub n_l: OperatorMatrix,
    /// `L_z = ħ (N_r − N_l)`.
    pub l_z: OperatorMatrix,
    /// `H_ho = ħ ω_T (N_r + N_l + 1)`.
    pub h_ho: OperatorMatrix,
}

/// Build `N_r`, `N_l`, `L_z` and `H_ho(ω_T)`; all pass the Hermiticity gate.
///
/// Because annihilation never leaves the truncated basis, the products
/// `a† a` are exact on the full basis, not just below the top shell.
pub fn number_and_angular_ops(basis: &FockBasis, hbar: f64, omega_t: f64) -> Result<ChiralOps> {
    let (a_r, a_l) = chiral_ladders(basis);
    let n_r = a_r.adjoint() * a_r.matrix();
    let n_l = a_l.adjoint() * a_l.matrix();
    let l_z = (&n_r - &n_l) * real(hbar);
    let identity = DMatrix::identity(basis.dim(), basis.dim());
    let h_ho = (&n_r + &n_l + identity) * real(hbar * omega_t);
    Ok(ChiralOps {
        n_r: OperatorMatrix::hermitian(n_r)?,
        n_l: OperatorMatrix::hermitian(n_l)?,
        l_z: OperatorMatrix::hermitian(l_z)?,
        h_ho: OperatorMatrix::hermitian(h_ho)?,
    })
}

/// Position and momentum quadratures for a reference width `Δ_ref`.
pub struct QuadratureOps {
    pub x: OperatorMatrix,
    pub y: OperatorMatrix,
    pub p_x: OperatorMatrix,
    pub p_y: OperatorMatrix,
}

/// `x = (Δ/√2)(a + a†)`, `p = (iħ/(√2 Δ))(a† − a)`, same pattern per mode.
pub fn position_momentum_ops(
    basis: &FockBasis,
    delta_ref: f64,
    hbar: f64,
) -> Result<QuadratureOps> {
    if !delta_ref.is_finite() || delta_ref <= 0.0 {
        return Err(Error::InvalidParams {
            field: "delta_ref",
            reason: format!("reference width must be positive, got {delta_ref}"),
        });
    }
    let (a_x, a_y) = ladder_matrices(basis);
    let pos = |a: &OperatorMatrix| (a.matrix() + a.adjoint()) * real(delta_ref / 2f64.sqrt());
    let mom = |a: &OperatorMatrix| {
        (a.adjoint() - a.matrix()) * Complex64::new(0.0, hbar / (2f64.sqrt() * delta_ref))
    };
    Ok(QuadratureOps {
        x: OperatorMatrix::hermitian(pos(&a_x))?,
        y: OperatorMatrix::hermitian(pos(&a_y))?,
        p_x: OperatorMatrix::hermitian(mom(&a_x))?,
        p_y: OperatorMatrix::hermitian(mom(&a_y))?,
    })
}

/// Diagonal spin matrix `σ_z ⊗ 1` on the basis.
pub fn sigma_z(basis: &FockBasis) -> OperatorMatrix {
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (i, s) in basis.states().iter().enumerate() {
        m[(i, i)] = real(match s.spin {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        });
    }
    OperatorMatrix::hermitian(m).expect("diagonal real matrix is Hermitian")
}
