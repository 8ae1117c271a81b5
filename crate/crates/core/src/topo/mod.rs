//! Region constructions and topological diagnostics: Kitaev–Preskill and
//! Levin–Wen entanglement entropies, topological log-negativity, topological
//! mutual information with its infinite-temperature lower bound, the
//! sandwich bounds on the LW mutual information and the closed-form upper
//! bound on the TEE.

mod metrics;
mod regions;
mod report;

pub use metrics::{
    bipartite_mutual_information, mutual_information, region_entropy, sigma_upper, tee_kp, tee_lw,
    tee_upper_bound, tln_kp, tmi, tmi_lower_bound, tmi_sandwich_bounds, SandwichBounds,
};
pub use regions::{kp_regions, lw_regions, Geometry, RegionKind, RegionSet};
pub use report::{topo_report, MetricSelection, TopoReport, CSV_HEADER};
