use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("subsystem index {index} out of range (layout has {count} subsystems)")]
    Subsystem { index: usize, count: usize },

    #[error("cutoff n_max = {n_max} is below the truncation rule ({required}) for amplitude {amplitude}")]
    Truncation {
        n_max: usize,
        required: usize,
        amplitude: f64,
    },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("input amplitudes are not normalized (squared norm {0})")]
    Unnormalized(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("coherent pair is degenerate (overlap magnitude {0}); no two-dimensional span")]
    DegenerateBasis(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("numerical tolerance violated: {0}")]
    Tolerance(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Coarse classification used to map failures onto process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Precondition,
    Tolerance,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parameter(_) => ErrorKind::Config,
            Error::Quadrature { .. } | Error::Tolerance(_) => ErrorKind::Tolerance,
            _ => ErrorKind::Precondition,
        }
    }
}
