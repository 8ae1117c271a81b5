use gausstopo::gaussian::{
    apply_symplectic, covariance_from_graph, log_negativity, measure_p, measure_p_set, measure_q,
    measure_q_set, phase_shift_blocks, symplectic_spectrum, thermal_scale, von_neumann_entropy,
    GaussGraph, StateRecord,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Random pure state: V symmetric with entries in [-1, 1], U = AAᵀ + ½I.
fn graph(max_modes: usize) -> impl Strategy<Value = GaussGraph> {
    (1..=max_modes).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-1.0f64..1.0, n * n),
        )
            .prop_map(move |(v, a)| {
                let v = DMatrix::from_fn(n, n, |i, j| v[i.min(j) * n + i.max(j)]);
                let a = DMatrix::from_row_slice(n, n, &a);
                let mut u = &a * a.transpose() + DMatrix::identity(n, n) * 0.5;
                u = (&u + u.transpose()) * 0.5;
                GaussGraph::new(v, u).unwrap()
            })
    })
}

/// Random state with V = 0, so the covariance matrix is q/p block-diagonal.
fn imaginary_graph(min_modes: usize, max_modes: usize) -> impl Strategy<Value = GaussGraph> {
    (min_modes..=max_modes).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |a| {
            let a = DMatrix::from_row_slice(n, n, &a);
            let u = &a * a.transpose() + DMatrix::identity(n, n) * 0.5;
            GaussGraph::imaginary((&u + u.transpose()) * 0.5).unwrap()
        })
    })
}

fn subset(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn full_state_is_pure(g in graph(10)) {
        let c = covariance_from_graph(&g).unwrap();
        let all: Vec<usize> = (0..g.n_modes()).collect();
        let spec = symplectic_spectrum(&c, &all).unwrap();
        for &s in spec.values() {
            prop_assert!((s - 0.5).abs() < 1e-9, "sigma = {s}");
        }
    }

    #[test]
    fn uncertainty_relation_holds(g in graph(8), kappa in 1.0f64..20.0) {
        let c = covariance_from_graph(&g).unwrap();
        prop_assert!(c.uncertainty_min_eigenvalue() >= -1e-9);
        let hot = thermal_scale(&c, kappa).unwrap();
        prop_assert!(hot.uncertainty_min_eigenvalue() >= -1e-9);
    }

    #[test]
    fn spectrum_is_linear_in_kappa(g in graph(8), kappa in 1.0f64..50.0, mask in 1u32..256) {
        let n = g.n_modes();
        let region = subset(n, mask);
        prop_assume!(!region.is_empty());
        let c = covariance_from_graph(&g).unwrap();
        let cold = symplectic_spectrum(&c, &region).unwrap();
        let hot = symplectic_spectrum(&thermal_scale(&c, kappa).unwrap(), &region).unwrap();
        for (a, b) in cold.values().iter().zip(hot.values()) {
            prop_assert!((kappa * a - b).abs() <= 1e-10 * kappa.max(*b), "{} vs {}", kappa * a, b);
        }
    }

    #[test]
    fn q_measurements_commute(g in graph(8), mask in 1u32..256) {
        let n = g.n_modes();
        let nodes = subset(n, mask);
        prop_assume!(!nodes.is_empty() && nodes.len() < n);
        let joint = measure_q_set(&g, &nodes).unwrap();
        let mut seq = g.clone();
        for &k in nodes.iter().rev() {
            seq = measure_q(&seq, k).unwrap();
        }
        prop_assert!(joint.max_abs_diff(&seq) <= 1e-10);
    }

    #[test]
    fn p_measurements_commute(g in graph(8), mask in 1u32..256) {
        let n = g.n_modes();
        let nodes = subset(n, mask);
        prop_assume!(!nodes.is_empty() && nodes.len() < n);
        let joint = measure_p_set(&g, &nodes).unwrap();
        // Highest index first keeps the remaining indices valid.
        let mut down = g.clone();
        for &k in nodes.iter().rev() {
            down = measure_p(&down, k).unwrap();
        }
        // Lowest index first, shifting the later indices.
        let mut up = g.clone();
        for (done, &k) in nodes.iter().enumerate() {
            up = measure_p(&up, k - done).unwrap();
        }
        prop_assert!(joint.max_abs_diff(&down) <= 1e-10);
        prop_assert!(joint.max_abs_diff(&up) <= 1e-10);
    }

    #[test]
    fn measure_p_matches_phase_shift_oracle(g in graph(12), pick in 0usize..12) {
        let n = g.n_modes();
        let k = pick % n;
        let direct = measure_p(&g, k).unwrap();
        let rotated = apply_symplectic(&g, &phase_shift_blocks(n, k)).unwrap();
        let oracle = measure_q(&rotated, k).unwrap();
        prop_assert!(direct.max_abs_diff(&oracle) <= 1e-9, "diff {}", direct.max_abs_diff(&oracle));
    }

    #[test]
    fn log_negativity_is_symmetric(g in imaginary_graph(2, 8), mask in 1u32..255) {
        let n = g.n_modes();
        let region = subset(n, mask);
        prop_assume!(!region.is_empty() && region.len() < n);
        let rest: Vec<usize> = (0..n).filter(|i| !region.contains(i)).collect();
        let c = covariance_from_graph(&g).unwrap();
        let a = log_negativity(&c, &region).unwrap();
        let b = log_negativity(&c, &rest).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn entropy_is_symmetric(g in graph(10), mask in 1u32..1023) {
        let n = g.n_modes();
        let region = subset(n, mask);
        prop_assume!(!region.is_empty() && region.len() < n);
        let rest: Vec<usize> = (0..n).filter(|i| !region.contains(i)).collect();
        let c = covariance_from_graph(&g).unwrap();
        let a = von_neumann_entropy(&symplectic_spectrum(&c, &region).unwrap());
        let b = von_neumann_entropy(&symplectic_spectrum(&c, &rest).unwrap());
        prop_assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }

    #[test]
    fn json_round_trip_is_exact(g in graph(6), kappa in 1.0f64..5.0) {
        let rec = StateRecord::from_graph(&g, kappa);
        let back = StateRecord::from_json(&rec.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &rec);
        let restored = back.to_graph().unwrap();
        prop_assert_eq!(restored.v(), g.v());
        prop_assert_eq!(restored.u(), g.u());
    }
}
