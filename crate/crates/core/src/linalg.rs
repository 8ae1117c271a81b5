//! Small dense linear-algebra helpers shared by the state and metric modules.

use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::{Error, Result};

/// Largest absolute entry of `m - mᵀ`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Rows/columns `rows` × `cols` of `m`, in the given order.
pub fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn principal(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    submatrix(m, idx, idx)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn sym_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn cholesky(m: DMatrix<f64>, what: &'static str) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m).ok_or(Error::NotPositiveDefinite { what })
}

/// Inverse of a symmetric positive-definite matrix, symmetrised.
pub fn spd_inverse(m: &DMatrix<f64>, what: &'static str) -> Result<DMatrix<f64>> {
    let mut inv = cholesky(m.clone(), what)?.inverse();
    symmetrize(&mut inv);
    Ok(inv)
}

/// Eigenvalues of the product `a · b` for symmetric `a ≻ 0` and symmetric `b`,
/// computed through the congruent symmetric matrix `Lᵀ b L` with `a = L Lᵀ`.
pub fn product_eigenvalues(a: DMatrix<f64>, b: &DMatrix<f64>, what: &'static str) -> Result<Vec<f64>> {
    let l = cholesky(a, what)?.unpack();
    let mut m = l.transpose() * b * &l;
    symmetrize(&mut m);
    Ok(sym_eigenvalues(m))
}

/// `[[0, I], [-I, 0]]` of size `2n`.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        omega[(i, n + i)] = 1.0;
        omega[(n + i, i)] = -1.0;
    }
    omega
}

/// Indices of `0..n` not contained in `region` (which must be in range).
pub fn complement(region: &[usize], n: usize) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &i in region {
        mark[i] = true;
    }
    (0..n).filter(|&i| !mark[i]).collect()
}

pub fn check_region(region: &[usize], n: usize) -> Result<Vec<usize>> {
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut sorted = region.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n_modes: n });
    }
    Ok(sorted)
}
