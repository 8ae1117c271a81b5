//! Square-lattice geometry, the cluster-state graph, the measurement pattern
//! that turns it into a surface-code state, and the surface-code nullifiers.
//!
//! Cluster nodes carry 1-based `(row, col)` labels and the id
//! `(row − 1)·cols + (col − 1)`. Nodes with both labels odd are measured in
//! `p`, both even in `q`; mixed-parity nodes survive and become the modes of
//! the surface code, in ascending node-id order. In the surface graph Λ the
//! p-nodes are vertices, the q-nodes faces and the surviving nodes edges.

mod nullifier;
mod pipeline;
mod spec;
mod surface;

pub use nullifier::{
    commutator, graph_residual, nullifier_commutators, nullifier_expectation, nullifier_vectors,
    CVector, CommutatorTable, NullifierSet,
};
pub use pipeline::{
    map_cluster_to_surface, rescale_gauge, surface_code_graph_analytic, AnalyticSurface,
    MappedState, RescaledGraph,
};
pub use spec::{
    cluster_adjacency, cluster_graph, cluster_multigraph, measurement_pattern, Boundary,
    LatticeSpec, MeasurementPattern, Site,
};
pub use surface::{EdgeKind, SurfaceGraph};
