//! Mach-Zehnder interferometry of particles carrying an internal clock in a
//! weak, static gravitational field.
//!
//! The clock's internal state picks up a path-dependent proper-time
//! evolution, so which-path information reduces fringe visibility and the
//! interferometric phase shift is set by the mass-energy of the clock. The
//! crate computes detection probabilities, visibility and
//! distinguishability, orthogonalization times of clock states, and the
//! planning and interpretation quantities built on them.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`.
//!
//! ```
//! use mzclock::*;
//!
//! # fn main() -> Result<()> {
//! let k = PhysicalConstants64::codata();
//! let spec = ClockSpec::from_angular_frequency(1.8e16, &k)?;
//! let cfg = InterferometerConfig::rectangular(
//!     1e-33,
//!     spec,
//!     Ket::balanced(2)?.into(),
//!     &RectangularLoop::new(1.0, 0.5),
//!     FieldConfig::planning(),
//!     k,
//! )?;
//! let r = interfere(&cfg)?;
//! assert!((r.visibility.powi(2) + r.distinguishability.powi(2) - 1.0).abs() < 1e-12);
//! # Ok(())
//! # }
//! ```

// `!(x > 0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod clock;
pub mod error;
pub mod interferometer;
pub mod physics;
pub mod scalar;

pub use analysis::{
    builtin_catalog, classify_outcome, feasibility_report, required_dhdt, sigma_tau_bound,
    FeasibilityReport, OutcomeClassification, SystemCatalogEntry, Verdict,
};
pub use clock::{
    evolve, mean_energy, orthogonalization_bound, orthogonalization_time,
    orthogonalization_time_with, overlap, path_distinguishability, search_orthogonalization_time,
    survival_amplitude, tightest_orthogonalization_bound, trace_distance, ClockOverlap, ClockSpec,
    ClockState, DensityMatrix, Ket, OrthogonalizationTime, SearchOptions,
};
pub use error::{Error, Result};
pub use interferometer::{
    brute_force_oracle, energy_corrections, gr_corrections, interfere, path_phase,
    visibility_from_dilation, Arm, DilationVisibility, InterferenceResult, InterferometerConfig,
    PathPhase, ProperTime, RectangularLoop, Segment, SymmetryReport, Trajectory,
};
pub use physics::{
    linearize_potential, proper_time_difference, tau_dot, tau_dot_deviation, tau_dot_shift,
    weak_field_metric, FieldConfig, LinearizedPotential, PhysicalConstants, WeakFieldMetric,
};
pub use scalar::Real;

pub type PhysicalConstants64 = PhysicalConstants<f64>;
pub type FieldConfig64 = FieldConfig<f64>;
pub type ClockSpec64 = ClockSpec<f64>;
pub type ClockState64 = ClockState<f64>;
pub type Ket64 = Ket<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type InterferometerConfig64 = InterferometerConfig<f64>;
pub type InterferenceResult64 = InterferenceResult<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type Segment64 = Segment<f64>;
pub type OrthogonalizationTime64 = OrthogonalizationTime<f64>;
pub type SystemCatalogEntry64 = SystemCatalogEntry<f64>;
