use nalgebra::{Complex, DMatrix};

use super::{GaussGraph, DEFAULT_MAX_CONDITION};
use crate::linalg::{asymmetry, spd_inverse, sym_eigenvalues, symmetrize, symplectic_form};
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;

/// Symmetrised second-moment matrix in `(q₁…q_N, p₁…p_N)` ordering.
///
/// `kappa` records the accumulated thermal scale (1 for a pure state).
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    gamma: DMatrix<f64>,
    kappa: f64,
    block_diagonal: bool,
}

impl CovMatrix {
    pub fn new(gamma: DMatrix<f64>, kappa: f64) -> Result<Self> {
        let dim = gamma.nrows();
        if gamma.ncols() != dim || dim % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "covariance matrix must be 2N x 2N, got {}x{}",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        if !(kappa >= 1.0) {
            return Err(Error::Domain(format!("kappa must be >= 1, got {kappa}")));
        }
        let asym = asymmetry(&gamma);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { what: "gamma", asymmetry: asym });
        }
        let n = dim / 2;
        let block_diagonal = (0..n).all(|i| (0..n).all(|j| gamma[(i, n + j)] == 0.0));
        Ok(Self { gamma, kappa, block_diagonal })
    }

    pub fn n_modes(&self) -> usize {
        self.gamma.nrows() / 2
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// True when the q–p cross block is identically zero.
    pub fn is_block_diagonal(&self) -> bool {
        self.block_diagonal
    }

    pub fn qq_block(&self) -> DMatrix<f64> {
        let n = self.n_modes();
        self.gamma.view((0, 0), (n, n)).into_owned()
    }

    pub fn pp_block(&self) -> DMatrix<f64> {
        let n = self.n_modes();
        self.gamma.view((n, n), (n, n)).into_owned()
    }

    /// Rows and columns of the given modes (q and p), keeping `qqpp` order.
    pub fn reduce(&self, modes: &[usize]) -> DMatrix<f64> {
        let n = self.n_modes();
        let k = modes.len();
        let idx: Vec<usize> = modes.iter().copied().chain(modes.iter().map(|&m| m + n)).collect();
        DMatrix::from_fn(2 * k, 2 * k, |i, j| self.gamma[(idx[i], idx[j])])
    }

    /// Smallest eigenvalue of the Hermitian matrix `Γ + iΩ/2`; non-negative
    /// (up to rounding) for every physical state.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let n = self.n_modes();
        if n == 0 {
            return 0.0;
        }
        let omega = symplectic_form(n);
        let h = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            Complex::new(self.gamma[(i, j)], 0.5 * omega[(i, j)])
        });
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `Γ = ½[[U⁻¹, U⁻¹V], [VU⁻¹, U + VU⁻¹V]]` with the default condition limit.
pub fn covariance_from_graph(g: &GaussGraph) -> Result<CovMatrix> {
    covariance_from_graph_with(g, DEFAULT_MAX_CONDITION)
}

pub fn covariance_from_graph_with(g: &GaussGraph, max_condition: f64) -> Result<CovMatrix> {
    let n = g.n_modes();
    if n == 0 {
        return CovMatrix::new(DMatrix::zeros(0, 0), 1.0);
    }
    let ev = sym_eigenvalues(g.u().clone());
    let cond = ev[n - 1] / ev[0];
    if !(ev[0] > 0.0) || !(cond <= max_condition) {
        return Err(Error::IllConditionedGraph { cond, threshold: max_condition });
    }
    let uinv = spd_inverse(g.u(), "U")?;
    let mut gamma = DMatrix::zeros(2 * n, 2 * n);
    gamma.view_mut((0, 0), (n, n)).copy_from(&(&uinv * 0.5));
    gamma.view_mut((n, n), (n, n)).copy_from(&(g.u() * 0.5));
    if !g.is_imaginary() {
        let uinv_v = &uinv * g.v();
        let mut lower = g.v() * &uinv_v + g.u();
        symmetrize(&mut lower);
        gamma.view_mut((0, n), (n, n)).copy_from(&(&uinv_v * 0.5));
        gamma.view_mut((n, 0), (n, n)).copy_from(&(uinv_v.transpose() * 0.5));
        gamma.view_mut((n, n), (n, n)).copy_from(&(lower * 0.5));
    }
    CovMatrix::new(gamma, 1.0)
}

/// Multiplies Γ (and the recorded scale) by `kappa ≥ 1`.
pub fn thermal_scale(c: &CovMatrix, kappa: f64) -> Result<CovMatrix> {
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!("kappa must be >= 1, got {kappa}")));
    }
    Ok(CovMatrix {
        gamma: &c.gamma * kappa,
        kappa: c.kappa * kappa,
        block_diagonal: c.block_diagonal,
    })
}
