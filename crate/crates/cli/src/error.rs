use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_THRESHOLD: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gausstopo::Error),

    #[error("invalid arguments: {0}")]
    Invalid(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Threshold(String),

    #[error("{failed} of {total} sweep points failed")]
    SweepFailures { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        use gausstopo::Error as E;
        match self {
            CliError::Invalid(_) | CliError::Io { .. } => EXIT_VALIDATION,
            CliError::Threshold(_) => EXIT_THRESHOLD,
            CliError::SweepFailures { .. } => EXIT_NUMERICAL,
            CliError::Core(e) => match e {
                E::NotSymmetric { .. }
                | E::DimensionMismatch(_)
                | E::Domain(_)
                | E::IndexOutOfRange { .. }
                | E::EmptyRegion
                | E::NonSymplectic { .. }
                | E::UnsupportedState(_)
                | E::DoesNotFit(_)
                | E::WrongRegionKind { .. }
                | E::Parity(_)
                | E::Serialization(_) => EXIT_VALIDATION,
                E::NotPositiveDefinite { .. }
                | E::IllConditionedGraph { .. }
                | E::SingularPivot { .. }
                | E::SingularTransform
                | E::Misclassified(_)
                | E::FitFailed { .. } => EXIT_NUMERICAL,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
