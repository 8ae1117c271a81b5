use nalgebra::{Complex, DMatrix};

use crate::linalg::{asymmetry, cholesky};
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Z-graph `Z = V + iU` of an N-mode zero-mean Gaussian pure state.
///
/// `V` and `U` are real symmetric and `U` is positive definite. A graph with
/// zero modes is allowed; it is what remains after measuring every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussGraph {
    v: DMatrix<f64>,
    u: DMatrix<f64>,
}

impl GaussGraph {
    pub fn new(v: DMatrix<f64>, u: DMatrix<f64>) -> Result<Self> {
        let n = u.nrows();
        if u.ncols() != n || v.nrows() != n || v.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "V is {}x{}, U is {}x{}",
                v.nrows(),
                v.ncols(),
                u.nrows(),
                u.ncols()
            )));
        }
        let av = asymmetry(&v);
        if av > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { what: "V", asymmetry: av });
        }
        let au = asymmetry(&u);
        if au > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { what: "U", asymmetry: au });
        }
        if n > 0 {
            cholesky(u.clone(), "U")?;
        }
        Ok(Self { v, u })
    }

    /// Purely imaginary graph `Z = iU`.
    pub fn imaginary(u: DMatrix<f64>) -> Result<Self> {
        let n = u.nrows();
        Self::new(DMatrix::zeros(n, n), u)
    }

    pub fn from_z(z: &DMatrix<Complex<f64>>) -> Result<Self> {
        Self::new(z.map(|c| c.re), z.map(|c| c.im))
    }

    pub fn empty() -> Self {
        Self { v: DMatrix::zeros(0, 0), u: DMatrix::zeros(0, 0) }
    }

    pub fn n_modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn z(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.n_modes(), self.n_modes(), |i, j| {
            Complex::new(self.v[(i, j)], self.u[(i, j)])
        })
    }

    /// True when `V` is identically zero, i.e. the covariance matrix is q/p
    /// block diagonal.
    pub fn is_imaginary(&self) -> bool {
        self.v.iter().all(|&x| x == 0.0)
    }

    /// Largest entrywise difference to another graph of the same size.
    pub fn max_abs_diff(&self, other: &GaussGraph) -> f64 {
        if self.n_modes() != other.n_modes() {
            return f64::INFINITY;
        }
        let dv = (&self.v - &other.v).amax();
        let du = (&self.u - &other.u).amax();
        dv.max(du)
    }
}
