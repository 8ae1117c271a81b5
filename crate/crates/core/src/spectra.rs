//! Normal-mode spectrum and gap of the surface-code parent Hamiltonian on an
//! `n × m` torus (vertex lattice), plus the size-independent gap of the
//! cluster-state Hamiltonian for contrast.
//!
//! Grids are indexed `j = (j_x, j_y)` row-major: entry `(j_x, j_y)` of an
//! `n × m` matrix, and index `j_x·m + j_y` in the commutator matrices.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::lattice::{cluster_graph, LatticeSpec};
use crate::linalg::sym_eigenvalues;
use crate::{Error, Result};

/// `[a_v, a_v′†]` on the torus as a function of the Euclidean vertex distance.
pub fn vertex_commutator(s: f64, d: f64) -> f64 {
    let s4 = s.powi(4);
    let den = 1.0 + 5.0 * s4;
    let d2 = (d * d).round() as i64;
    if (d * d - d2 as f64).abs() > 1e-9 {
        return 0.0;
    }
    match d2 {
        0 => 1.0,
        1 => (1.0 + 8.0 * s4) / (4.0 * den),
        2 => s4 / (2.0 * den),
        4 => s4 / (4.0 * den),
        _ => 0.0,
    }
}

/// `[b_f, b_f′†]` on the torus as a function of the Euclidean face distance.
pub fn face_commutator(d: f64) -> f64 {
    if d.abs() < 1e-9 {
        1.0
    } else if (d - 1.0).abs() < 1e-9 {
        0.25
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub n: usize,
    pub m: usize,
    pub s: f64,
    /// Vertex branch `ω_j`, `n × m`.
    pub omegas: Vec<Vec<f64>>,
    /// Face branch `δ_j`, `n × m`.
    pub deltas: Vec<Vec<f64>>,
    pub gap: f64,
    pub gap_asymptotic: f64,
    /// Set when both sides are even and the face branch has an exact zero.
    pub zero_mode: bool,
}

/// `cos(2π k / r)` with the angle fraction formed first so that half turns
/// give exactly −1.
fn cos_frac(k: usize, r: usize) -> f64 {
    let turns = (2 * k) as f64 / r as f64;
    (turns * PI).cos()
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n < 3 || m < 3 {
        return Err(Error::Domain(format!("torus needs n, m >= 3, got {n}x{m}")));
    }
    Ok(())
}

pub fn normal_modes(n: usize, m: usize, s: f64) -> Result<SpectrumResult> {
    check_dims(n, m)?;
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let w1 = vertex_commutator(s, 1.0);
    let w_diag = vertex_commutator(s, 2f64.sqrt());
    let w2 = vertex_commutator(s, 2.0);
    let x1 = face_commutator(1.0);
    let mut omegas = vec![vec![0.0; m]; n];
    let mut deltas = vec![vec![0.0; m]; n];
    for jx in 0..n {
        for jy in 0..m {
            let (ca, cb) = (cos_frac(jx, n), cos_frac(jy, m));
            // cos(a ± b) via the integer numerators keeps exact zeros.
            let sum = cos_frac(jx * m + jy * n, n * m);
            let diff = cos_frac((jx * m + (n * m - jy * n)) % (n * m), n * m);
            let (c2a, c2b) = (cos_frac(2 * jx, n), cos_frac(2 * jy, m));
            omegas[jx][jy] = 1.0 + 2.0 * w1 * (ca + cb) + 2.0 * w_diag * (sum + diff) + 2.0 * w2 * (c2a + c2b);
            deltas[jx][jy] = 1.0 + 2.0 * x1 * (ca + cb);
        }
    }
    let s2 = s * s;
    let vertex_scale = 8.0 * s2 / (1.0 + 5.0 * s2 * s2);
    let face_scale = 8.0 / s2;
    let gap = omegas
        .iter()
        .flatten()
        .map(|&w| vertex_scale * w)
        .chain(deltas.iter().flatten().map(|&d| face_scale * d))
        .fold(f64::INFINITY, f64::min)
        // Rounding can leave the vertex-branch zero of even tori at -1e-17.
        .max(0.0);
    Ok(SpectrumResult {
        n,
        m,
        s,
        omegas,
        deltas,
        gap,
        gap_asymptotic: gap_asymptotic(n.min(m), s),
        zero_mode: n % 2 == 0 && m % 2 == 0,
    })
}

/// Smallest prefactored normal-mode energy; exactly 0 on even × even tori.
pub fn gap(n: usize, m: usize, s: f64) -> Result<f64> {
    Ok(normal_modes(n, m, s)?.gap)
}

/// Large-lattice approximation `4π²/(s²n²)`.
pub fn gap_asymptotic(n: usize, s: f64) -> f64 {
    4.0 * PI * PI / (s * s * (n * n) as f64)
}

fn shift(r: usize, k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, r, |i, j| if i == (j + k) % r { 1.0 } else { 0.0 })
}

/// `M_v` and `M_f` assembled from cyclic shifts with the commutator weights.
pub fn commutator_matrices(n: usize, m: usize, s: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_dims(n, m)?;
    let w1 = vertex_commutator(s, 1.0);
    let w_diag = vertex_commutator(s, 2f64.sqrt());
    let w2 = vertex_commutator(s, 2.0);
    let x1 = face_commutator(1.0);
    let (idn, idm) = (DMatrix::<f64>::identity(n, n), DMatrix::<f64>::identity(m, m));
    let (xn, xm) = (shift(n, 1), shift(m, 1));
    let (xn2, xm2) = (shift(n, 2), shift(m, 2));
    let nearest = idn.kronecker(&(&xm + xm.transpose())) + (&xn + xn.transpose()).kronecker(&idm);
    let diagonal = xn.kronecker(&xm)
        + xn.transpose().kronecker(&xm.transpose())
        + xn.kronecker(&xm.transpose())
        + xn.transpose().kronecker(&xm);
    let second = idn.kronecker(&(&xm2 + xm2.transpose())) + (&xn2 + xn2.transpose()).kronecker(&idm);
    let id = DMatrix::identity(n * m, n * m);
    let mv = &id + &nearest * w1 + diagonal * w_diag + second * w2;
    let mf = id + nearest * x1;
    Ok((mv, mf))
}

/// Gap `2s⁻² · λ_min(C)` of the cluster Hamiltonian, where `C` is the
/// commutator matrix of the normalised cluster nullifiers `∝ p_j − Σ_k Z_jk q_k`.
pub fn cluster_gap(spec: &LatticeSpec) -> f64 {
    let z = cluster_graph(spec).z();
    let n = spec.n_nodes();
    let i = Complex::new(0.0, 1.0);
    // [η_j, η_k†] for η_j = p_j − Σ Z_jl q_l is i(Z̄_jk − Z_kj) = 2 Im Z_jk.
    let raw = DMatrix::from_fn(n, n, |j, k| (i * (z[(j, k)].conj() - z[(k, j)])).re);
    let norm = DVector::from_fn(n, |j, _| raw[(j, j)].sqrt());
    let c = DMatrix::from_fn(n, n, |j, k| raw[(j, k)] / (norm[j] * norm[k]));
    let s2 = spec.s().powi(2);
    2.0 / s2 * sym_eigenvalues(c)[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    #[test]
    fn three_by_three_at_unit_squeezing() {
        let r = normal_modes(3, 3, 1.0).unwrap();
        let min_delta = r.deltas.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        assert!((min_delta - 0.5).abs() < 1e-15);
        assert!((r.deltas[1][1] - 0.5).abs() < 1e-15);
        assert!((r.omegas[1][1] - 0.25).abs() < 1e-15);
        assert!((r.gap - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.deltas[0][0], 2.0);
        assert!(!r.zero_mode);
    }

    #[test]
    fn even_torus_has_exact_zero_mode() {
        let r = normal_modes(4, 6, 1.3).unwrap();
        assert_eq!(r.deltas[2][3], 0.0);
        assert_eq!(r.gap, 0.0);
        assert!(r.zero_mode);
    }

    #[test]
    fn closed_form_matches_diagonalisation() {
        for (n, m) in [(3, 3), (5, 7), (4, 6)] {
            let s = std::f64::consts::E;
            let r = normal_modes(n, m, s).unwrap();
            let (mv, mf) = commutator_matrices(n, m, s).unwrap();
            let ev = sym_eigenvalues(mv.clone());
            let om = sorted(r.omegas.concat());
            assert!(ev.iter().zip(&om).all(|(a, b)| (a - b).abs() < 1e-10));
            let ef = sym_eigenvalues(mf.clone());
            let de = sorted(r.deltas.concat());
            assert!(ef.iter().zip(&de).all(|(a, b)| (a - b).abs() < 1e-10));
            let row_v = 1.0 + 4.0 * (vertex_commutator(s, 1.0) + vertex_commutator(s, 2f64.sqrt()) + vertex_commutator(s, 2.0));
            for k in 0..n * m {
                assert!((mv.row(k).sum() - row_v).abs() < 1e-12);
                assert!((mf.row(k).sum() - 2.0).abs() < 1e-15);
            }
            assert_eq!(mv, mv.transpose());
        }
    }

    #[test]
    fn asymptotic_gap_scaling() {
        assert!((gap_asymptotic(10, 1.0) - 4.0 * PI * PI / 100.0).abs() < 1e-15);
        assert!((gap_asymptotic(20, 2.0) * 4.0 - gap_asymptotic(10, 2.0)).abs() < 1e-15);
        assert!(gap_asymptotic(10, 1e8) < 1e-14);
    }

    #[test]
    fn cluster_gap_is_size_independent() {
        for (rows, cols, log_s) in [(3, 4, 0.5), (6, 6, 1.0), (5, 9, -0.3)] {
            let spec = LatticeSpec::torus(rows, cols, log_s).unwrap();
            let expected = 2.0 / spec.s().powi(2);
            assert!((cluster_gap(&spec) - expected).abs() < 1e-12 * expected);
        }
    }
}
