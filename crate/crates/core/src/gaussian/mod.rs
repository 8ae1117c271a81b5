//! Gaussian-state algebra.
//!
//! Pure zero-mean states are carried as Z-graphs ([`GaussGraph`]); mixed
//! (thermally scaled) states as covariance matrices ([`CovMatrix`]). All
//! operations are pure functions of their inputs.

mod covariance;
mod graph;
mod measure;
mod record;
mod spectrum;

pub use covariance::{covariance_from_graph, covariance_from_graph_with, thermal_scale, CovMatrix};
pub use graph::GaussGraph;
pub use measure::{
    apply_symplectic, measure_p, measure_p_set, measure_q, measure_q_set, phase_shift_blocks,
    squeeze_blocks, SymplecticBlocks,
};
pub use record::StateRecord;
pub use spectrum::{
    log_negativity, purity, symplectic_spectrum, symplectic_spectrum_general, von_neumann_entropy,
    SymplecticSpectrum, DEFAULT_TOL_HALF,
};

/// Default upper bound on cond(U) accepted when building a covariance matrix.
pub const DEFAULT_MAX_CONDITION: f64 = 1e13;
