use gausstopo::lattice::{
    nullifier_commutators, nullifier_vectors, CVector, LatticeSpec, SurfaceGraph,
};
use gausstopo::spectra::{cluster_gap, gap, vertex_commutator};
use nalgebra::Complex;

fn bicolour(row: usize, col: usize) -> f64 {
    if ((row + col) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn signed_sum<'a>(len: usize, items: impl Iterator<Item = (f64, &'a CVector)>) -> f64 {
    let mut acc = CVector::zeros(len);
    for (sign, v) in items {
        acc += v * Complex::new(sign, 0.0);
    }
    acc.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn even_torus_face_nullifiers_are_dependent() {
    for (rows, cols) in [(8, 8), (8, 12)] {
        let sg = SurfaceGraph::new(&LatticeSpec::torus(rows, cols, 1.0).unwrap()).unwrap();
        let ns = nullifier_vectors(&sg, std::f64::consts::E);
        let len = 2 * sg.n_modes();
        let faces = sg.faces().iter().zip(&ns.face).map(|(f, v)| (bicolour(f.row, f.col), v));
        assert!(signed_sum(len, faces) < 1e-12);
    }
}

#[test]
fn even_torus_vertex_nullifiers_are_dependent() {
    let sg = SurfaceGraph::new(&LatticeSpec::torus(8, 8, 1.0).unwrap()).unwrap();
    let ns = nullifier_vectors(&sg, std::f64::consts::E);
    let len = 2 * sg.n_modes();
    let vertices = sg
        .vertices()
        .iter()
        .zip(&ns.vertex)
        .map(|(v, a)| (bicolour(v.row, v.col), a.as_ref().unwrap()));
    assert!(signed_sum(len, vertices) < 1e-12);
}

#[test]
fn nearest_vertex_commutator_at_unit_squeezing() {
    assert!((vertex_commutator(1.0, 1.0) - 0.375).abs() < 1e-15);
    let sg = SurfaceGraph::new(&LatticeSpec::torus(10, 10, 0.0).unwrap()).unwrap();
    let table = nullifier_commutators(&nullifier_vectors(&sg, 1.0));
    let mut seen = 0;
    for (i, a) in sg.vertices().iter().enumerate() {
        for (j, b) in sg.vertices().iter().enumerate() {
            if sg.lattice_distance(*a, *b) == 1.0 {
                assert!((table.vertex[(i, j)].re - 0.375).abs() < 1e-12);
                seen += 1;
            }
        }
    }
    assert_eq!(seen, 4 * sg.vertices().len());
    assert!(table.mixed.iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn cluster_gap_is_flat_while_surface_gap_closes() {
    let s = 1.5f64;
    for side in [6, 8, 12] {
        let spec = LatticeSpec::torus(side, side, s.ln()).unwrap();
        assert!((cluster_gap(&spec) - 2.0 / (s * s)).abs() < 1e-10);
    }
    let sizes = [21usize, 81, 161];
    let gaps: Vec<f64> = sizes.iter().map(|&n| gap(n, n, s).unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    // Inverse-square scaling: n²·Δ settles to a constant.
    let scaled: Vec<f64> = sizes.iter().zip(&gaps).map(|(&n, g)| (n * n) as f64 * g).collect();
    assert!((scaled[2] / scaled[1] - 1.0).abs() < 0.05, "{scaled:?}");
}
