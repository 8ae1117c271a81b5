use nalgebra::{Complex, DMatrix, DVector};

use super::surface::SurfaceGraph;
use crate::gaussian::{CovMatrix, GaussGraph};
use crate::linalg::symplectic_form;

/// Complex coefficient vector over `(q, p)`.
pub type CVector = DVector<Complex<f64>>;

/// Vertex and face nullifiers as coefficient vectors over `(q, p)`: the
/// operator is `Σ_k c_k r_k`. Every vector is normalised to `[η, η†] = 1`.
#[derive(Debug, Clone)]
pub struct NullifierSet {
    pub n_modes: usize,
    /// One entry per vertex; `None` for isolated vertices.
    pub vertex: Vec<Option<CVector>>,
    pub face: Vec<CVector>,
    /// `s′ = √(5s² + s⁻²)`.
    pub norm_sprime: f64,
    /// `s_v = √(V(v)s² + s⁻²)` per vertex.
    pub norm_sv: Vec<f64>,
    /// Vertex-lattice distances between vertices and between faces.
    pub vertex_distance: DMatrix<f64>,
    pub face_distance: DMatrix<f64>,
}

/// `[η, ζ†] = i cᵀ Ω d̄` for `η = cᵀr`, `ζ = dᵀr`.
pub fn commutator(c: &CVector, d: &CVector) -> Complex<f64> {
    let n = c.len() / 2;
    let mut acc = Complex::new(0.0, 0.0);
    for k in 0..n {
        acc += c[k] * d[n + k].conj() - c[n + k] * d[k].conj();
    }
    acc * Complex::new(0.0, 1.0)
}

fn normalised(mut c: CVector) -> CVector {
    let norm = commutator(&c, &c).re;
    c /= Complex::new(norm.sqrt(), 0.0);
    c
}

pub fn nullifier_vectors(sg: &SurfaceGraph, s: f64) -> NullifierSet {
    let n = sg.n_modes();
    let s2 = s * s;
    let nv = sg.vertices().len();
    let mut vertex = Vec::with_capacity(nv);
    let mut norm_sv = Vec::with_capacity(nv);
    for v in 0..nv {
        let valence = sg.valence(v) as f64;
        let sv2 = valence * s2 + 1.0 / s2;
        norm_sv.push(sv2.sqrt());
        if sg.valence(v) == 0 {
            vertex.push(None);
            continue;
        }
        let mut c = CVector::zeros(2 * n);
        for &e in sg.vertex_edges(v) {
            c[e] += Complex::new(1.0, 0.0);
            c[n + e] += Complex::new(0.0, 1.0 / sv2);
            for &w in sg.edge_endpoints(e).iter().filter(|&&w| w != v) {
                for &f in sg.vertex_edges(w) {
                    c[f] += Complex::new(s2 / sv2, 0.0);
                }
            }
        }
        vertex.push(Some(normalised(c)));
    }
    let face = (0..sg.faces().len())
        .map(|f| {
            let mut c = CVector::zeros(2 * n);
            for b in sg.face_boundary(f) {
                let o = b.sign as f64;
                c[b.edge] += Complex::new(0.0, -o / s2);
                c[n + b.edge] += Complex::new(o, 0.0);
            }
            normalised(c)
        })
        .collect();
    let distances = |sites: &[super::Site]| {
        DMatrix::from_fn(sites.len(), sites.len(), |i, j| sg.lattice_distance(sites[i], sites[j]))
    };
    NullifierSet {
        n_modes: n,
        vertex,
        face,
        norm_sprime: (5.0 * s2 + 1.0 / s2).sqrt(),
        norm_sv,
        vertex_distance: distances(sg.vertices()),
        face_distance: distances(sg.faces()),
    }
}

/// Commutators `[a_v, a_v′†]`, `[b_f, b_f′†]` and `[a_v, b_f†]`. Rows for
/// isolated vertices are zero.
#[derive(Debug, Clone)]
pub struct CommutatorTable {
    pub vertex: DMatrix<Complex<f64>>,
    pub face: DMatrix<Complex<f64>>,
    pub mixed: DMatrix<Complex<f64>>,
}

pub fn nullifier_commutators(ns: &NullifierSet) -> CommutatorTable {
    let zero = Complex::new(0.0, 0.0);
    let pair = |a: &Option<CVector>, b: &Option<CVector>| match (a, b) {
        (Some(a), Some(b)) => commutator(a, b),
        _ => zero,
    };
    let (nv, nf) = (ns.vertex.len(), ns.face.len());
    CommutatorTable {
        vertex: DMatrix::from_fn(nv, nv, |i, j| pair(&ns.vertex[i], &ns.vertex[j])),
        face: DMatrix::from_fn(nf, nf, |i, j| commutator(&ns.face[i], &ns.face[j])),
        mixed: DMatrix::from_fn(nv, nf, |i, j| match &ns.vertex[i] {
            Some(a) => commutator(a, &ns.face[j]),
            None => zero,
        }),
    }
}

/// `⟨η†η⟩ = c̄ᵀ (Γ + iΩ/2) c`, zero when η annihilates the state.
pub fn nullifier_expectation(c: &CovMatrix, coeffs: &CVector) -> f64 {
    let n = c.n_modes();
    let omega = symplectic_form(n);
    let mut acc = Complex::new(0.0, 0.0);
    for j in 0..2 * n {
        if coeffs[j] == Complex::new(0.0, 0.0) {
            continue;
        }
        for k in 0..2 * n {
            let m = Complex::new(c.gamma()[(j, k)], 0.5 * omega[(j, k)]);
            acc += coeffs[j].conj() * m * coeffs[k];
        }
    }
    acc.re
}

/// Largest entry of `c_q + Z c_p`; an operator `c_qᵀq + c_pᵀp` annihilates
/// the graph state exactly when this vanishes.
pub fn graph_residual(g: &GaussGraph, coeffs: &CVector) -> f64 {
    let n = g.n_modes();
    let cq = coeffs.rows(0, n).into_owned();
    let cp = coeffs.rows(n, n).into_owned();
    (cq + g.z() * cp).iter().map(|x| x.norm()).fold(0.0, f64::max)
}
