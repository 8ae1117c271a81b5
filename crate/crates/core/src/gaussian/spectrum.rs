use nalgebra::DMatrix;

use super::CovMatrix;
use crate::linalg::{check_region, principal, product_eigenvalues, sym_eigenvalues, symmetrize, symplectic_form, cholesky};
use crate::{Error, Result};

/// Default tolerance for deciding `σ = ½`.
pub const DEFAULT_TOL_HALF: f64 = 1e-9;

/// Positive symplectic eigenvalues of a (reduced) covariance matrix, sorted
/// descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
    tol_half: f64,
}

impl SymplecticSpectrum {
    /// Sorts the values; those within `tol_half` below ½ are clamped to ½.
    pub fn new(mut values: Vec<f64>, tol_half: f64) -> Result<Self> {
        for v in values.iter_mut() {
            if !v.is_finite() || *v < 0.5 - tol_half {
                return Err(Error::Domain(format!("symplectic eigenvalue {v} below 1/2")));
            }
            if *v < 0.5 {
                *v = 0.5;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values, tol_half })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tol_half(&self) -> f64 {
        self.tol_half
    }

    pub fn with_tol_half(mut self, tol_half: f64) -> Self {
        self.tol_half = tol_half;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of values with `σ > ½ + tol_half`.
    pub fn n_greater(&self) -> usize {
        self.values.iter().filter(|&&s| s > 0.5 + self.tol_half).count()
    }

    /// Number of values with `|σ − ½| ≤ tol_half`.
    pub fn n_equal(&self) -> usize {
        self.values.iter().filter(|&&s| (s - 0.5).abs() <= self.tol_half).count()
    }
}

/// Symplectic spectrum of the reduction of `c` to `region`.
///
/// Block-diagonal states use the symmetric eigenproblem `Lᵀ Γ_pp L` with
/// `Γ_qq = L Lᵀ`; other states go through [`symplectic_spectrum_general`].
pub fn symplectic_spectrum(c: &CovMatrix, region: &[usize]) -> Result<SymplecticSpectrum> {
    let region = check_region(region, c.n_modes())?;
    if !c.is_block_diagonal() {
        return general(c, &region);
    }
    let n = c.n_modes();
    let gx = principal(c.gamma(), &region);
    let p_idx: Vec<usize> = region.iter().map(|&i| i + n).collect();
    let gp = principal(c.gamma(), &p_idx);
    let ev = product_eigenvalues(gx, &gp, "reduced q block")?;
    SymplecticSpectrum::new(ev.into_iter().map(|l| l.max(0.0).sqrt()).collect(), DEFAULT_TOL_HALF)
}

/// Symplectic spectrum via the antisymmetric matrix `K = Lᵀ Ω L` with
/// `Γ_R = L Lᵀ`; the eigenvalues of `KᵀK` are the `σ²`, each twice.
pub fn symplectic_spectrum_general(c: &CovMatrix, region: &[usize]) -> Result<SymplecticSpectrum> {
    let region = check_region(region, c.n_modes())?;
    general(c, &region)
}

fn general(c: &CovMatrix, region: &[usize]) -> Result<SymplecticSpectrum> {
    let k = region.len();
    let reduced = c.reduce(region);
    let l = cholesky(reduced, "reduced covariance")?.unpack();
    let km = l.transpose() * symplectic_form(k) * &l;
    let mut ktk = km.transpose() * &km;
    symmetrize(&mut ktk);
    let ev = sym_eigenvalues(ktk);
    let values = ev
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect();
    SymplecticSpectrum::new(values, DEFAULT_TOL_HALF)
}

fn entropy_term(sigma: f64, tol_half: f64) -> f64 {
    if sigma - 0.5 <= tol_half {
        return 0.0;
    }
    let up = sigma + 0.5;
    let down = sigma - 0.5;
    if sigma < 2.0 {
        return up * up.log2() - down * down.log2();
    }
    // Same quantity without the cancellation between two large terms.
    (sigma * (1.0 / down).ln_1p() + 0.5 * (up * down).ln()) / std::f64::consts::LN_2
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(spec: &SymplecticSpectrum) -> f64 {
    spec.values.iter().map(|&s| entropy_term(s, spec.tol_half)).sum()
}

/// `Π (2σ)⁻¹`.
pub fn purity(spec: &SymplecticSpectrum) -> f64 {
    spec.values.iter().map(|&s| 1.0 / (2.0 * s)).product()
}

/// Log-negativity (bits) of the bipartition `region` | complement for a q/p
/// block-diagonal state.
pub fn log_negativity(c: &CovMatrix, region: &[usize]) -> Result<f64> {
    if !c.is_block_diagonal() {
        return Err(Error::UnsupportedState(
            "log-negativity requires a q/p block-diagonal covariance matrix".into(),
        ));
    }
    let n = c.n_modes();
    let region = check_region(region, n)?;
    let mut sign = vec![1.0; n];
    for &i in &region {
        sign[i] = -1.0;
    }
    let gx = c.qq_block() * 2.0;
    let gp = c.pp_block() * 2.0;
    let flipped = DMatrix::from_fn(n, n, |i, j| sign[i] * gp[(i, j)] * sign[j]);
    let ev = product_eigenvalues(gx, &flipped, "q block")?;
    Ok(-0.5 * ev.iter().map(|&l| l.min(1.0).log2()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{covariance_from_graph, thermal_scale, GaussGraph};

    fn vacuum(n: usize) -> CovMatrix {
        covariance_from_graph(&GaussGraph::imaginary(DMatrix::identity(n, n)).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_and_thermal_spectra() {
        let spec = symplectic_spectrum(&vacuum(1), &[0]).unwrap();
        assert_eq!(spec.values(), &[0.5]);
        assert_eq!(von_neumann_entropy(&spec), 0.0);
        assert_eq!(purity(&spec), 1.0);
        let hot = thermal_scale(&vacuum(1), 3.0).unwrap();
        let spec = symplectic_spectrum(&hot, &[0]).unwrap();
        assert!((spec.values()[0] - 1.5).abs() < 1e-15);
        assert!((von_neumann_entropy(&spec) - 2.0).abs() < 1e-14);
        assert!((purity(&spec) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(spec.n_greater(), 1);
    }

    #[test]
    fn entropy_of_quoted_eigenvalue() {
        let sigma = 0.5 * 1.5f64.sqrt();
        let spec = SymplecticSpectrum::new(vec![sigma], DEFAULT_TOL_HALF).unwrap();
        let expected = (sigma + 0.5) * (sigma + 0.5).log2() - (sigma - 0.5) * (sigma - 0.5).log2();
        assert!((von_neumann_entropy(&spec) - expected).abs() < 1e-15);
        assert!((von_neumann_entropy(&spec) - 0.525).abs() < 5e-4);
    }

    #[test]
    fn entropy_branches_agree() {
        for sigma in [1.9999999, 2.0, 2.5, 40.0] {
            let direct = (sigma + 0.5) * f64::log2(sigma + 0.5) - (sigma - 0.5) * f64::log2(sigma - 0.5);
            assert!((entropy_term(sigma, DEFAULT_TOL_HALF) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn pair_of_halves_is_pure() {
        let spec = SymplecticSpectrum::new(vec![0.5, 0.5 - 1e-12], DEFAULT_TOL_HALF).unwrap();
        assert_eq!(purity(&spec), 1.0);
        assert_eq!(spec.n_equal(), 2);
        assert!(SymplecticSpectrum::new(vec![0.4], DEFAULT_TOL_HALF).is_err());
    }

    #[test]
    fn empty_region_is_domain_error() {
        assert_eq!(symplectic_spectrum(&vacuum(2), &[]), Err(Error::EmptyRegion));
    }

    #[test]
    fn negativity_rejects_general_state() {
        let g = GaussGraph::new(DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, 1.0)).unwrap();
        let c = covariance_from_graph(&g).unwrap();
        assert!(matches!(log_negativity(&c, &[0]), Err(Error::UnsupportedState(_))));
        assert_eq!(log_negativity(&vacuum(3), &[1]).unwrap(), 0.0);
    }
}
