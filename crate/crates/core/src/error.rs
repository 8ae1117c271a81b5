use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { what: &'static str, asymmetry: f64 },

    #[error("{what} is not positive definite")]
    NotPositiveDefinite { what: &'static str },

    #[error("graph U-part is ill-conditioned (condition number {cond:e} > {threshold:e})")]
    IllConditionedGraph { cond: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },

    #[error("region is empty")]
    EmptyRegion,

    #[error("singular pivot while measuring p on node {node} (|Z_kk| = {magnitude:e})")]
    SingularPivot { node: usize, magnitude: f64 },

    #[error("symplectic transform produced a singular (A + BZ)")]
    SingularTransform,

    #[error("blocks are not symplectic (max deviation {deviation:e})")]
    NonSymplectic { deviation: f64 },

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("region does not fit in the lattice: {0}")]
    DoesNotFit(String),

    #[error("expected {expected} regions, found {found}")]
    WrongRegionKind { expected: &'static str, found: &'static str },

    #[error("lattice parity error: {0}")]
    Parity(String),

    #[error("misclassified symplectic spectrum: {0}")]
    Misclassified(String),

    #[error("fit failed to converge (residual {residual:e} after {iterations} iterations)")]
    FitFailed {
        residual: f64,
        iterations: usize,
        trace: Vec<f64>,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
