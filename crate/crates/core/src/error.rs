use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("not a trap along axis {axis}: curvature coefficient {q:.4e} V/m^2 is not positive")]
    Confinement { axis: char, q: f64 },

    #[error("resonant drive (Delta_a = Delta_s): the dispersive expansion diverges; use the dynamics module")]
    ResonantDetuning,

    #[error("forbidden transition: dipole matrix element is zero")]
    ForbiddenTransition,

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("relaxation did not converge after {iterations} sweeps (last update {last_update:.3e} V, residual {residual:.3e} V/m^2)")]
    SolverNonConvergence {
        iterations: usize,
        last_update: f64,
        residual: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("field evaluated on the wire axis")]
    WireSingularity,

    #[error("propagation failed: {0}")]
    Propagation(String),

    #[error("no steady state without decay (gamma must be > 0)")]
    NoSteadyState,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
