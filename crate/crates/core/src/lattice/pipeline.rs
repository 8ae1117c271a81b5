use nalgebra::DMatrix;

use super::spec::{cluster_graph, measurement_pattern, Boundary, LatticeSpec, Site};
use super::surface::{check_torus_dims, SurfaceGraph};
use crate::gaussian::{apply_symplectic, measure_p_set, measure_q_set, squeeze_blocks, GaussGraph};
use crate::linalg::complement;
use crate::{Error, Result};

/// Surface-code state together with the cluster site of each mode.
#[derive(Debug, Clone)]
pub struct MappedState {
    pub graph: GaussGraph,
    pub modes: Vec<Site>,
}

/// Closed-form surface-code graph. `approximate` is set for planar lattices,
/// where the bulk formula ignores boundary corrections.
#[derive(Debug, Clone)]
pub struct AnalyticSurface {
    pub graph: GaussGraph,
    pub modes: Vec<Site>,
    pub approximate: bool,
}

/// Builds the cluster state, measures `p` on odd/odd nodes and `q` on
/// even/even nodes, and returns the state of the surviving modes.
pub fn map_cluster_to_surface(spec: &LatticeSpec) -> Result<MappedState> {
    check_torus_dims(spec)?;
    let pattern = measurement_pattern(spec);
    let cluster = cluster_graph(spec);
    let after_p = measure_p_set(&cluster, &pattern.p_nodes)?;
    let remaining = complement(&pattern.p_nodes, spec.n_nodes());
    let q_positions: Vec<usize> = remaining
        .iter()
        .enumerate()
        .filter(|(_, id)| pattern.q_nodes.binary_search(id).is_ok())
        .map(|(k, _)| k)
        .collect();
    let graph = measure_q_set(&after_p, &q_positions)?;
    let modes = pattern.kept.iter().map(|&id| spec.site(id)).collect();
    Ok(MappedState { graph, modes })
}

/// `Z = i[s² A_SC + (s⁻² + 2s²) I]`.
pub fn surface_code_graph_analytic(spec: &LatticeSpec) -> Result<AnalyticSurface> {
    let sg = SurfaceGraph::new(spec)?;
    let s2 = spec.s().powi(2);
    let n = sg.n_modes();
    let u = sg.adjacency_sc() * s2 + DMatrix::identity(n, n) * (1.0 / s2 + 2.0 * s2);
    Ok(AnalyticSurface {
        graph: GaussGraph::imaginary(u)?,
        modes: sg.edges().to_vec(),
        approximate: spec.boundary == Boundary::Planar,
    })
}

#[derive(Debug, Clone)]
pub struct RescaledGraph {
    pub graph: GaussGraph,
    /// Effective squeezing `s̃ = √(g/ε)`.
    pub effective_s: f64,
}

/// Maps a weight-`g` graph `Z = g V₀ + iε I` to `V₀ + i(ε/g) I` by a uniform
/// q-squeeze of `√g`.
pub fn rescale_gauge(g: &GaussGraph, weight: f64, eps: f64) -> Result<RescaledGraph> {
    if !(weight > 0.0 && weight < 0.25) {
        return Err(Error::Domain(format!("weight must lie in (0, 1/4), got {weight}")));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let n = g.n_modes();
    let expected = DMatrix::identity(n, n) * eps;
    if (g.u() - expected).amax() > 1e-12 * eps.max(1.0) {
        return Err(Error::Domain("imaginary part is not eps times the identity".into()));
    }
    let graph = apply_symplectic(g, &squeeze_blocks(n, weight))?;
    Ok(RescaledGraph { graph, effective_s: (weight / eps).sqrt() })
}
