use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("velocity projection of mode {mode} is not finite")]
    NonFiniteQuadrature { mode: usize },

    #[error("operation needs at least {needed} Hermite modes, state has {have}")]
    TooFewModes { needed: usize, have: usize },

    #[error("Hermite mode {n} out of range for {n_modes} modes")]
    ModeOutOfRange { n: usize, n_modes: usize },

    #[error("fields live on different meshes")]
    MeshMismatch,

    #[error("Poisson source violates compatibility: integral = {residual:e}")]
    Compatibility { residual: f64 },

    #[error("Poisson system is singular")]
    SingularSystem,

    #[error("time step {dt:e} exceeds the CFL limit (Courant number {courant:.4} > {limit}) at t = {time}")]
    CflViolation {
        dt: f64,
        courant: f64,
        limit: f64,
        time: f64,
    },

    #[error("non-finite state detected at t = {time}")]
    NonFinite { time: f64 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("output error: {0}")]
    Output(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the numerics rather than by the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::CflViolation { .. }
                | Error::SingularSystem
                | Error::Compatibility { .. }
                | Error::NonFiniteQuadrature { .. }
        )
    }
}
