//! Gaussian-state simulation of finitely squeezed continuous-variable cluster
//! states and the surface-code states obtained from them by quadrature
//! measurements.
//!
//! The crate is organised bottom-up:
//!
//! * [`gaussian`]: Z-graphs (`Z = V + iU`), covariance matrices, symplectic
//!   spectra, entropies, log-negativity and measurement updates.
//! * [`lattice`]: square-lattice geometry, the cluster → surface-code
//!   measurement pipeline, the closed-form surface-code graph and nullifiers.
//! * [`topo`]: Kitaev–Preskill / Levin–Wen regions, TEE, TLN, TMI and bounds.
//! * [`spectra`]: normal-mode spectrum and gap of the surface-code
//!   Hamiltonian on the torus.
//! * [`correlations`]: quadrature correlations, the Demko–Moss–Smith decay
//!   bound and correlation-length fits.
//!
//! Quadratures are always ordered `(q_1 … q_N, p_1 … p_N)` with
//! `Ω = [[0, I], [-I, 0]]`.

pub mod correlations;
pub mod error;
pub mod gaussian;
pub mod lattice;
pub mod linalg;
pub mod spectra;
pub mod topo;

pub use error::{Error, Result};
