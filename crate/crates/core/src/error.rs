use thiserror::Error;

/// Errors raised by the simulator. Every variant names the violated guard.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weak-field guard violated: |phi|/c^2 = {ratio:e} (potential {potential:e} m^2/s^2) must be < {limit:e}")]
    WeakField {
        potential: f64,
        ratio: f64,
        limit: f64,
    },

    #[error("slow-particle guard violated: speed/c = {ratio:e} (speed {speed:e} m/s) must be < {limit:e}")]
    FastParticle { speed: f64, ratio: f64, limit: f64 },

    #[error("height-offset guard violated: |delta_h|/R = {ratio:e} (delta_h {delta_h:e} m) must be < {limit:e}")]
    HeightOffset {
        delta_h: f64,
        ratio: f64,
        limit: f64,
    },

    #[error("{quantity} must be {requirement}, got {value:e}")]
    OutOfRange {
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("invalid clock spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid clock state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected} levels, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mixed-state overlap requires both states to evolve from a common initial state under the same spectrum")]
    NoCommonOrigin,

    #[error("cannot overlap a pure state with a mixed state")]
    IncomparableStates,

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("interferometer paths are not symmetric: {0}")]
    AsymmetricPaths(String),

    #[error("clock dimension {dim} exceeds the brute-force cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn out_of_range(
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    ) -> Self {
        Error::OutOfRange {
            quantity,
            requirement,
            value,
        }
    }
}
