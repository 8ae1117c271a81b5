use nalgebra::{Complex, DMatrix};

use super::GaussGraph;
use crate::linalg::{complement, symplectic_form};
use crate::{Error, Result};

type CMatrix = DMatrix<Complex<f64>>;

/// Minimum |Z_kk| accepted as a p-measurement pivot.
pub const PIVOT_TOL: f64 = 1e-12;
const SYMPLECTIC_TOL: f64 = 1e-10;

/// Blocks of a symplectic matrix `Y = [[A, B], [C, D]]` acting on `(q, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticBlocks {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl SymplecticBlocks {
    pub fn identity(n: usize) -> Self {
        Self {
            a: DMatrix::identity(n, n),
            b: DMatrix::zeros(n, n),
            c: DMatrix::zeros(n, n),
            d: DMatrix::identity(n, n),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.a.nrows()
    }

    pub fn full(&self) -> DMatrix<f64> {
        let n = self.n_modes();
        let mut y = DMatrix::zeros(2 * n, 2 * n);
        y.view_mut((0, 0), (n, n)).copy_from(&self.a);
        y.view_mut((0, n), (n, n)).copy_from(&self.b);
        y.view_mut((n, 0), (n, n)).copy_from(&self.c);
        y.view_mut((n, n), (n, n)).copy_from(&self.d);
        y
    }

    /// Largest entry of `YΩYᵀ − Ω`.
    pub fn symplectic_deviation(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        let y = self.full();
        (&y * &omega * y.transpose() - omega).amax()
    }
}

/// π/2 phase shift on mode `k`: `q_k → −p_k`, `p_k → q_k`.
pub fn phase_shift_blocks(n: usize, k: usize) -> SymplecticBlocks {
    let mut e = DMatrix::zeros(n, n);
    e[(k, k)] = 1.0;
    let id = DMatrix::<f64>::identity(n, n);
    SymplecticBlocks { a: &id - &e, b: -&e, c: e.clone(), d: id - e }
}

/// Uniform q-squeeze `A = √g I`, `D = I/√g`, which maps `Z ↦ Z/g`.
pub fn squeeze_blocks(n: usize, g: f64) -> SymplecticBlocks {
    let r = g.sqrt();
    SymplecticBlocks {
        a: DMatrix::identity(n, n) * r,
        b: DMatrix::zeros(n, n),
        c: DMatrix::zeros(n, n),
        d: DMatrix::identity(n, n) / r,
    }
}

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex::new(x, 0.0))
}

fn symmetrized(mut z: CMatrix) -> CMatrix {
    let n = z.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (z[(i, j)] + z[(j, i)]) * 0.5;
            z[(i, j)] = avg;
            z[(j, i)] = avg;
        }
    }
    z
}

fn check_node(g: &GaussGraph, node: usize) -> Result<()> {
    if node >= g.n_modes() {
        return Err(Error::IndexOutOfRange { index: node, n_modes: g.n_modes() });
    }
    Ok(())
}

fn check_nodes(g: &GaussGraph, nodes: &[usize]) -> Result<Vec<usize>> {
    for &k in nodes {
        check_node(g, k)?;
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

fn csub(z: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| z[(rows[i], cols[j])])
}

/// `Z' = (C + DZ)(A + BZ)⁻¹`.
pub fn apply_symplectic(g: &GaussGraph, y: &SymplecticBlocks) -> Result<GaussGraph> {
    let n = g.n_modes();
    if [&y.a, &y.b, &y.c, &y.d].iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(Error::DimensionMismatch(format!("symplectic blocks must be {n}x{n}")));
    }
    let deviation = y.symplectic_deviation();
    if !(deviation <= SYMPLECTIC_TOL) {
        return Err(Error::NonSymplectic { deviation });
    }
    let z = g.z();
    let denom = to_complex(&y.a) + to_complex(&y.b) * &z;
    let numer = to_complex(&y.c) + to_complex(&y.d) * &z;
    // Z' = N M⁻¹, so Z'ᵀ solves Mᵀ X = Nᵀ.
    let lu = denom.transpose().lu();
    let scale = denom.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let min_pivot = (0..n).map(|i| lu.u()[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if n > 0 && !(min_pivot > 1e-13 * scale) {
        return Err(Error::SingularTransform);
    }
    let x = lu.solve(&numer.transpose()).ok_or(Error::SingularTransform)?;
    GaussGraph::from_z(&symmetrized(x.transpose()))
}

/// Homodyne measurement of `q` on `node` with outcome 0: deletes the node.
pub fn measure_q(g: &GaussGraph, node: usize) -> Result<GaussGraph> {
    check_node(g, node)?;
    measure_q_set(g, &[node])
}

pub fn measure_q_set(g: &GaussGraph, nodes: &[usize]) -> Result<GaussGraph> {
    let nodes = check_nodes(g, nodes)?;
    let keep = complement(&nodes, g.n_modes());
    let v = crate::linalg::principal(g.v(), &keep);
    let u = crate::linalg::principal(g.u(), &keep);
    GaussGraph::new(v, u)
}

/// Homodyne measurement of `p` on `node` with outcome 0:
/// `Z' = Z_minor − z_k z_kᵀ / Z_kk`.
pub fn measure_p(g: &GaussGraph, node: usize) -> Result<GaussGraph> {
    check_node(g, node)?;
    measure_p_set(g, &[node])
}

/// Joint p-measurement of several nodes through the block Schur complement
/// `Z_KK − Z_KP Z_PP⁻¹ Z_PK`, equal to measuring them one at a time in any
/// order.
pub fn measure_p_set(g: &GaussGraph, nodes: &[usize]) -> Result<GaussGraph> {
    let nodes = check_nodes(g, nodes)?;
    if nodes.is_empty() {
        return Ok(g.clone());
    }
    let keep = complement(&nodes, g.n_modes());
    let z = g.z();
    let zpp = csub(&z, &nodes, &nodes);
    if nodes.len() == 1 {
        let pivot = zpp[(0, 0)];
        if pivot.norm() < PIVOT_TOL {
            return Err(Error::SingularPivot { node: nodes[0], magnitude: pivot.norm() });
        }
        let zk = csub(&z, &keep, &nodes);
        let update = &zk * zk.transpose() / pivot;
        return GaussGraph::from_z(&symmetrized(csub(&z, &keep, &keep) - update));
    }
    let lu = zpp.lu();
    let (mut worst, mut at) = (f64::INFINITY, 0);
    for i in 0..nodes.len() {
        let m = lu.u()[(i, i)].norm();
        if m < worst {
            worst = m;
            at = i;
        }
    }
    if !(worst >= PIVOT_TOL) {
        return Err(Error::SingularPivot { node: nodes[at], magnitude: worst });
    }
    let zpk = csub(&z, &nodes, &keep);
    let solved = lu.solve(&zpk).ok_or(Error::SingularPivot { node: nodes[at], magnitude: worst })?;
    let zkp = csub(&z, &keep, &nodes);
    let result = csub(&z, &keep, &keep) - zkp * solved;
    GaussGraph::from_z(&symmetrized(result))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cluster_pair(s: f64) -> GaussGraph {
        let v = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        GaussGraph::new(v, DMatrix::identity(2, 2) / (s * s)).unwrap()
    }

    #[test]
    fn q_measurement_on_pair_leaves_squeezed_mode() {
        let s: f64 = 2.0;
        let g = measure_q(&cluster_pair(s), 1).unwrap();
        assert_eq!(g.n_modes(), 1);
        assert_eq!(g.v()[(0, 0)], 0.0);
        assert_eq!(g.u()[(0, 0)], 1.0 / (s * s));
        let single = GaussGraph::imaginary(DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert_eq!(measure_q(&single, 0).unwrap().n_modes(), 0);
        assert!(matches!(measure_q(&single, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn p_measurement_on_pair_matches_schur_value() {
        let s: f64 = 1.7;
        let g = measure_p(&cluster_pair(s), 1).unwrap();
        assert!(g.v()[(0, 0)].abs() < 1e-15);
        assert!((g.u()[(0, 0)] - (s * s + 1.0 / (s * s))).abs() < 1e-14);
    }

    #[test]
    fn p_measurement_of_isolated_mode_is_deletion() {
        let v = DMatrix::from_row_slice(3, 3, &[0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let u = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let g = GaussGraph::new(v, u).unwrap();
        let a = measure_p(&g, 2).unwrap();
        let b = measure_q(&g, 2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn zero_pivot_is_reported() {
        let mut z = CMatrix::zeros(2, 2);
        z[(0, 0)] = Complex::new(0.0, 1.0);
        z[(1, 1)] = Complex::new(0.0, 1e-14);
        let g = GaussGraph::from_z(&z).unwrap();
        assert!(matches!(measure_p(&g, 1), Err(Error::SingularPivot { node: 1, .. })));
    }

    #[test]
    fn phase_shift_twice_fixes_graph() {
        let v = DMatrix::from_row_slice(2, 2, &[0.3, -0.4, -0.4, 1.1]);
        let u = DMatrix::from_row_slice(2, 2, &[1.2, 0.2, 0.2, 0.9]);
        let g = GaussGraph::new(v, u).unwrap();
        let y = phase_shift_blocks(2, 0);
        assert!(y.symplectic_deviation() < 1e-15);
        let twice = apply_symplectic(&apply_symplectic(&g, &y).unwrap(), &y).unwrap();
        // Fourier squared is parity on mode 0: couplings to it change sign.
        let mut parity = g.z();
        parity[(0, 1)] = -parity[(0, 1)];
        parity[(1, 0)] = -parity[(1, 0)];
        assert!(twice.max_abs_diff(&GaussGraph::from_z(&parity).unwrap()) < 1e-12);
        let single = GaussGraph::new(DMatrix::from_element(1, 1, -0.7), DMatrix::from_element(1, 1, 0.4)).unwrap();
        let y1 = phase_shift_blocks(1, 0);
        let back = apply_symplectic(&apply_symplectic(&single, &y1).unwrap(), &y1).unwrap();
        assert!(back.max_abs_diff(&single) < 1e-14);
        let same = apply_symplectic(&g, &SymplecticBlocks::identity(2)).unwrap();
        assert!(same.max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn non_symplectic_blocks_rejected() {
        let g = cluster_pair(1.0);
        let mut y = SymplecticBlocks::identity(2);
        y.a[(0, 0)] = 2.0;
        assert!(matches!(apply_symplectic(&g, &y), Err(Error::NonSymplectic { .. })));
    }

    #[test]
    fn squeeze_divides_graph() {
        let g = cluster_pair(1.0);
        let out = apply_symplectic(&g, &squeeze_blocks(2, 0.2)).unwrap();
        assert!((out.v()[(0, 1)] - 5.0).abs() < 1e-13);
        assert!((out.u()[(0, 0)] - 5.0).abs() < 1e-13);
    }
}
