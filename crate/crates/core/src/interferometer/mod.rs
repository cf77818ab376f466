//! Semiclassical Mach-Zehnder interferometer for a particle carrying a clock.
//!
//! Each arm contributes a dynamical phase from the potential-coupled part of
//! the laboratory Hamiltonian and an elapsed proper time that drives the
//! clock. The potential is measured from the laboratory origin, so the
//! common `phi(R)` phase and the common reference proper time (a particle at
//! the origin height with the same speed profile) never enter floating-point
//! arithmetic. Both are overall factors shared by the two arms.

mod oracle;
mod trajectory;

use serde::Serialize;

pub use oracle::{brute_force_oracle, ORACLE_DIMENSION_CAP, ORACLE_PHASE_GRID};
pub use trajectory::{Arm, RectangularLoop, Segment, Trajectory};

use crate::clock::{self, ClockSpec, ClockState};
use crate::error::{Error, Result};
use crate::physics::{self, FieldConfig, PhysicalConstants};
use crate::scalar::Real;

/// Relative spread between the two arms' mean `E_corr` above which the
/// result is flagged.
pub const ENERGY_CORRECTION_ASYMMETRY: f64 = 1e-6;

/// Complete description of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterferometerConfig<T> {
    /// Particle rest mass (kg).
    pub mass: T,
    pub clock: ClockSpec<T>,
    pub clock_initial: ClockState<T>,
    pub paths: (Trajectory<T>, Trajectory<T>),
    /// Phase-shifter setting on the second arm (rad).
    pub phase_shift: T,
    pub field: FieldConfig<T>,
    pub constants: PhysicalConstants<T>,
}

/// How far a pair of paths departs from the symmetric-kinematics assumption.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymmetryReport<T> {
    /// `|T_1 - T_2| / max(T_1, T_2)` for total coordinate times.
    pub time_mismatch: T,
    /// Whether both arms spend equal time at each speed.
    pub speed_profiles_match: bool,
}

impl<T: Real> SymmetryReport<T> {
    pub fn is_symmetric(&self) -> bool {
        self.time_mismatch <= T::exact_tol() && self.speed_profiles_match
    }
}

impl<T: Real> InterferometerConfig<T> {
    /// Rectangular loop with the given geometry, phase shifter at zero.
    pub fn rectangular(
        mass: T,
        clock: ClockSpec<T>,
        clock_initial: ClockState<T>,
        geometry: &RectangularLoop<T>,
        field: FieldConfig<T>,
        constants: PhysicalConstants<T>,
    ) -> Result<Self> {
        let cfg = InterferometerConfig {
            mass,
            clock,
            clock_initial,
            paths: geometry.paths()?,
            phase_shift: T::zero(),
            field,
            constants,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_phase_shift(mut self, phase_shift: T) -> Self {
        self.phase_shift = phase_shift;
        self
    }

    pub fn symmetry(&self) -> SymmetryReport<T> {
        let (a, b) = &self.paths;
        let (ta, tb) = (a.total_time(), b.total_time());
        let longest = ta.max(tb);
        let time_mismatch = if longest > T::zero() {
            (ta - tb).abs() / longest
        } else {
            T::zero()
        };
        let (pa, pb) = (a.speed_profile(), b.speed_profile());
        let tol = T::exact_tol();
        let speed_profiles_match = pa.len() == pb.len()
            && pa.iter().zip(&pb).all(|(x, y)| {
                (x.0 - y.0).abs() <= tol * x.0.abs().max(T::one())
                    && (x.1 - y.1).abs() <= tol * ta.max(tb)
            });
        SymmetryReport {
            time_mismatch,
            speed_profiles_match,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > T::zero()) {
            return Err(Error::out_of_range(
                "mass",
                "finite and > 0",
                self.mass.to_f64_lossy(),
            ));
        }
        if !self.phase_shift.is_finite() {
            return Err(Error::out_of_range(
                "phase shift",
                "finite",
                self.phase_shift.to_f64_lossy(),
            ));
        }
        if self.clock_initial.dim() != self.clock.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.clock.dim(),
                found: self.clock_initial.dim(),
            });
        }
        if self.paths.0.arm() == self.paths.1.arm() {
            return Err(Error::InvalidTrajectory(
                "both trajectories are on the same arm".into(),
            ));
        }
        let report = self.symmetry();
        if report.time_mismatch > T::exact_tol() {
            return Err(Error::AsymmetricPaths(format!(
                "total coordinate times differ by {:e} relative",
                report.time_mismatch.to_f64_lossy()
            )));
        }
        if !report.speed_profiles_match {
            return Err(Error::AsymmetricPaths(
                "speed profiles differ between arms".into(),
            ));
        }
        Ok(())
    }

    /// Trajectory of the given arm.
    pub fn path(&self, arm: Arm) -> &Trajectory<T> {
        if self.paths.0.arm() == arm {
            &self.paths.0
        } else {
            &self.paths.1
        }
    }
}

/// `(E_k^GR, E_corr^GR)` at absolute potential `phi` and speed (J), with
/// the clock Hamiltonian inside `E_k^GR` replaced by `mean_clock_energy`.
pub fn energy_corrections<T: Real>(
    phi: T,
    speed: T,
    mass: T,
    mean_clock_energy: T,
    k: &PhysicalConstants<T>,
) -> Result<(T, T)> {
    // guards only
    physics::tau_dot_deviation(phi, speed, k)?;
    let p = mass * speed;
    let kinetic = p * p / (T::lit(2.0) * mass);
    let q = p / (T::lit(2.0) * mass * k.c);
    let e_k = kinetic * (T::one() + T::lit(3.0) * q * q - mean_clock_energy / (mass * k.c2()));
    let e_corr = T::lit(0.5) * mass * phi - T::lit(3.0) * kinetic;
    Ok((e_k, e_corr))
}

/// [`energy_corrections`] at a height above the laboratory origin, using the
/// linearized potential `phi(R) + g h`.
pub fn gr_corrections<T: Real>(
    height: T,
    speed: T,
    mass: T,
    mean_clock_energy: T,
    field: &FieldConfig<T>,
    k: &PhysicalConstants<T>,
) -> Result<(T, T)> {
    let lin = physics::linearize_potential(field, height, k)?;
    energy_corrections(lin.phi_r + lin.delta_v, speed, mass, mean_clock_energy, k)
}

/// Proper time along one arm, split into pieces that are each computed
/// without cancellation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProperTime<T> {
    /// Coordinate time (s).
    pub coordinate: T,
    /// `sum dt (tau_dot(phi_R, v) - 1)`: dilation of the reference particle
    /// at the origin height with the same speed profile (s).
    pub reference_offset: T,
    /// `sum dt (tau_dot(phi_R + g h, v) - tau_dot(phi_R, v))` (s).
    pub dilation: T,
}

impl<T: Real> ProperTime<T> {
    /// Total elapsed proper time; for display only, the sum rounds away
    /// the dilation at laboratory scale.
    pub fn total(&self) -> T {
        self.coordinate + self.reference_offset + self.dilation
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathPhase<T> {
    /// `(1/hbar) sum dt (g h / c^2)(m c^2 + E_corr)`, unreduced (rad).
    pub dynamical_phase: T,
    pub proper_time: ProperTime<T>,
    /// Time average of `E_corr^GR` along the arm (J).
    pub mean_energy_correction: T,
}

pub fn path_phase<T: Real>(
    traj: &Trajectory<T>,
    cfg: &InterferometerConfig<T>,
) -> Result<PathPhase<T>> {
    let k = &cfg.constants;
    let mean_clock = clock::mean_energy(&cfg.clock_initial, &cfg.clock)?;
    let mut phase = T::zero();
    let mut proper = ProperTime {
        coordinate: T::zero(),
        reference_offset: T::zero(),
        dilation: T::zero(),
    };
    let mut e_corr_time = T::zero();
    let mut e_corr_plain = T::zero();
    for seg in traj.segments() {
        let lin = physics::linearize_potential(&cfg.field, seg.height, k)?;
        let speed = seg.speed();
        let (_, e_corr) =
            energy_corrections(lin.phi_r + lin.delta_v, speed, cfg.mass, mean_clock, k)?;
        // (dphi / c^2)(m c^2 + E_corr) = dphi (m + E_corr / c^2)
        phase = phase + seg.duration * lin.delta_v * (cfg.mass + e_corr / k.c2()) / k.hbar;
        proper.coordinate = proper.coordinate + seg.duration;
        proper.reference_offset = proper.reference_offset
            + seg.duration * physics::tau_dot_deviation(lin.phi_r, speed, k)?;
        proper.dilation = proper.dilation
            + seg.duration * physics::tau_dot_shift(lin.phi_r, lin.delta_v, speed, k)?;
        e_corr_time = e_corr_time + seg.duration * e_corr;
        e_corr_plain = e_corr_plain + e_corr;
    }
    // a zero-length arm has no time average; fall back to the plain mean
    let mean_energy_correction = if proper.coordinate > T::zero() {
        e_corr_time / proper.coordinate
    } else {
        e_corr_plain / T::from_usize(traj.segments().len()).expect("segment count fits")
    };
    Ok(PathPhase {
        dynamical_phase: phase,
        proper_time: proper,
        mean_energy_correction,
    })
}

/// Detector statistics and which-way quantities for one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferenceResult<T> {
    pub p_plus: T,
    pub p_minus: T,
    pub visibility: T,
    pub distinguishability: T,
    /// `Phi_1 - Phi_2`, unreduced (rad).
    pub delta_phi: T,
    /// Phase of the clock overlap, in `(-pi, pi]`.
    pub alpha: T,
    /// `tau_1 - tau_2` (s).
    pub delta_tau: T,
    /// Mean of the two arms' time-averaged `E_corr^GR` (J).
    pub mean_energy_correction: T,
    /// Set when the arms' `E_corr^GR` averages differ by more than
    /// [`ENERGY_CORRECTION_ASYMMETRY`] relative.
    pub energy_correction_asymmetric: bool,
}

impl<T: Real> InterferenceResult<T> {
    /// `P_+ - P_-`.
    pub fn contrast(&self) -> T {
        self.p_plus - self.p_minus
    }

    /// `Delta Phi + alpha`, the argument of the fringe cosine without the
    /// phase shifter.
    pub fn fringe_phase(&self) -> T {
        self.delta_phi + self.alpha
    }
}

pub(crate) struct ArmPhases<T> {
    pub first: PathPhase<T>,
    pub second: PathPhase<T>,
}

pub(crate) fn arm_phases<T: Real>(cfg: &InterferometerConfig<T>) -> Result<ArmPhases<T>> {
    cfg.validate()?;
    Ok(ArmPhases {
        first: path_phase(cfg.path(Arm::First), cfg)?,
        second: path_phase(cfg.path(Arm::Second), cfg)?,
    })
}

fn energy_correction_summary<T: Real>(a: T, b: T) -> (T, bool) {
    let scale = a.abs().max(b.abs());
    let asymmetric =
        scale > T::zero() && (a - b).abs() > T::lit(ENERGY_CORRECTION_ASYMMETRY) * scale;
    ((a + b) / T::lit(2.0), asymmetric)
}

/// Closed-form detection probabilities `1/2 +- 1/2 |<t1|t2>| cos(dPhi + alpha + phi)`.
pub fn interfere<T: Real>(cfg: &InterferometerConfig<T>) -> Result<InterferenceResult<T>> {
    let arms = arm_phases(cfg)?;
    let k = &cfg.constants;
    let tau1 = arms.first.proper_time.dilation;
    let tau2 = arms.second.proper_time.dilation;
    let clock1 = clock::evolve(&cfg.clock_initial, &cfg.clock, tau1, k)?;
    let clock2 = clock::evolve(&cfg.clock_initial, &cfg.clock, tau2, k)?;
    let ov = clock::overlap(&clock1, &clock2)?;
    let delta_phi = arms.first.dynamical_phase - arms.second.dynamical_phase;
    let half = T::lit(0.5);
    let fringe = half * ov.modulus * (delta_phi + ov.phase_alpha + cfg.phase_shift).cos();
    let distinguishability =
        clock::path_distinguishability(&cfg.clock_initial, &cfg.clock, tau1, tau2, k)?;
    let (mean_energy_correction, energy_correction_asymmetric) = energy_correction_summary(
        arms.first.mean_energy_correction,
        arms.second.mean_energy_correction,
    );
    Ok(InterferenceResult {
        p_plus: half + fringe,
        p_minus: half - fringe,
        visibility: ov.modulus,
        distinguishability,
        delta_phi,
        alpha: ov.phase_alpha,
        delta_tau: tau1 - tau2,
        mean_energy_correction,
        energy_correction_asymmetric,
    })
}

/// Visibility for a clock with orthogonalization time `t_perp` after a
/// proper-time split `delta_tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DilationVisibility<T> {
    pub visibility: T,
    /// The clock never ticks; visibility is maximal.
    pub infinite_t_perp: bool,
}

/// `|cos((delta_tau / t_perp)(pi/2))|`.
pub fn visibility_from_dilation<T: Real>(delta_tau: T, t_perp: T) -> Result<DilationVisibility<T>> {
    if !delta_tau.is_finite() {
        return Err(Error::out_of_range(
            "delta_tau",
            "finite",
            delta_tau.to_f64_lossy(),
        ));
    }
    if t_perp.is_infinite() && t_perp > T::zero() {
        return Ok(DilationVisibility {
            visibility: T::one(),
            infinite_t_perp: true,
        });
    }
    if !(t_perp > T::zero()) {
        return Err(Error::out_of_range("t_perp", "> 0", t_perp.to_f64_lossy()));
    }
    Ok(DilationVisibility {
        visibility: (delta_tau / t_perp * T::FRAC_PI_2()).cos().abs(),
        infinite_t_perp: false,
    })
}
