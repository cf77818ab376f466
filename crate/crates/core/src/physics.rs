//! Weak-field kinematics: metric expansion, proper-time rate, potential
//! linearization around the laboratory origin.
//!
//! Proper-time rates differ from 1 by parts in 10^16 at laboratory scale,
//! which is the resolution of `f64` itself. Everything that feeds a phase
//! therefore works with deviations (`tau_dot - 1`, or the difference of two
//! rates) assembled from the expansion terms, never by subtracting two
//! numbers close to one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest admissible `|phi|/c^2` for the quadratic metric expansion.
pub const WEAK_FIELD_LIMIT: f64 = 1e-3;
/// Largest admissible `v/c`.
pub const SLOW_PARTICLE_LIMIT: f64 = 1e-2;
/// Largest admissible `|delta_h|/R` for the linear potential.
pub const HEIGHT_OFFSET_LIMIT: f64 = 1e-3;

/// Fundamental constants in SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalConstants<T> {
    /// Speed of light (m/s).
    pub c: T,
    /// Reduced Planck constant (J s).
    pub hbar: T,
    /// Newton's constant (m^3 kg^-1 s^-2).
    pub big_g: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(c: T, hbar: T, big_g: T) -> Result<Self> {
        for (name, v) in [("c", c), ("hbar", hbar), ("G", big_g)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::out_of_range(
                    name,
                    "finite and > 0",
                    v.to_f64_lossy(),
                ));
            }
        }
        Ok(PhysicalConstants { c, hbar, big_g })
    }

    /// CODATA 2018 values.
    pub fn codata() -> Self {
        PhysicalConstants {
            c: T::lit(299_792_458.0),
            hbar: T::lit(1.054_571_817e-34),
            big_g: T::lit(6.674_30e-11),
        }
    }

    #[inline]
    pub fn c2(&self) -> T {
        self.c * self.c
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata()
    }
}

/// Gravitating source and laboratory position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldConfig<T> {
    /// Source mass M (kg).
    pub source_mass: T,
    /// Distance R of the laboratory origin from the source centre (m).
    pub radius: T,
    /// Surface acceleration replacing GM/R^2 when set (m/s^2).
    pub g_override: Option<T>,
}

impl<T: Real> FieldConfig<T> {
    pub fn new(source_mass: T, radius: T) -> Result<Self> {
        if !(source_mass.is_finite() && source_mass > T::zero()) {
            return Err(Error::out_of_range(
                "source mass",
                "finite and > 0",
                source_mass.to_f64_lossy(),
            ));
        }
        if !(radius.is_finite() && radius > T::zero()) {
            return Err(Error::out_of_range(
                "radius",
                "finite and > 0",
                radius.to_f64_lossy(),
            ));
        }
        Ok(FieldConfig {
            source_mass,
            radius,
            g_override: None,
        })
    }

    /// Earth mass and mean radius, exact `GM/R^2`.
    pub fn earth() -> Self {
        FieldConfig {
            source_mass: T::lit(5.972e24),
            radius: T::lit(6.371e6),
            g_override: None,
        }
    }

    /// Earth with the flat `g = 10 m/s^2` used for experiment planning.
    pub fn planning() -> Self {
        Self::earth()
            .with_g(T::lit(10.0))
            .expect("10 m/s^2 is valid")
    }

    pub fn with_g(mut self, g: T) -> Result<Self> {
        if !(g.is_finite() && g > T::zero()) {
            return Err(Error::out_of_range("g", "finite and > 0", g.to_f64_lossy()));
        }
        self.g_override = Some(g);
        Ok(self)
    }

    /// `GM/R^2` of the source, ignoring any override.
    pub fn source_acceleration(&self, k: &PhysicalConstants<T>) -> T {
        k.big_g * self.source_mass / (self.radius * self.radius)
    }

    /// Effective laboratory acceleration.
    pub fn g(&self, k: &PhysicalConstants<T>) -> T {
        self.g_override
            .unwrap_or_else(|| self.source_acceleration(k))
    }

    /// Newtonian potential `-GM/R` at the laboratory origin.
    pub fn potential_at_origin(&self, k: &PhysicalConstants<T>) -> T {
        -k.big_g * self.source_mass / self.radius
    }

    /// Exact Newtonian potential `-GM/(R + h)`.
    pub fn exact_potential(&self, height: T, k: &PhysicalConstants<T>) -> T {
        -k.big_g * self.source_mass / (self.radius + height)
    }
}

/// Metric components to quadratic order in `phi/c^2`.
///
/// `g00` is dimensionless; `gij_scalar` multiplies `delta_ij` and carries
/// the `1/c^2` so that `tau_dot = sqrt(-g00 - gij_scalar v^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakFieldMetric<T> {
    pub g00: T,
    pub gij_scalar: T,
}

fn check_weak_field<T: Real>(phi: T, k: &PhysicalConstants<T>) -> Result<T> {
    let u = phi / k.c2();
    let limit = T::lit(WEAK_FIELD_LIMIT);
    if !(u.is_finite() && u.abs() < limit) {
        return Err(Error::WeakField {
            potential: phi.to_f64_lossy(),
            ratio: u.abs().to_f64_lossy(),
            limit: WEAK_FIELD_LIMIT,
        });
    }
    Ok(u)
}

fn check_speed<T: Real>(speed: T, k: &PhysicalConstants<T>) -> Result<T> {
    let beta = speed.abs() / k.c;
    if !(beta.is_finite() && beta < T::lit(SLOW_PARTICLE_LIMIT)) {
        return Err(Error::FastParticle {
            speed: speed.to_f64_lossy(),
            ratio: beta.to_f64_lossy(),
            limit: SLOW_PARTICLE_LIMIT,
        });
    }
    Ok(beta)
}

pub fn weak_field_metric<T: Real>(phi: T, k: &PhysicalConstants<T>) -> Result<WeakFieldMetric<T>> {
    let u = check_weak_field(phi, k)?;
    let two = T::lit(2.0);
    Ok(WeakFieldMetric {
        g00: -(T::one() + two * u + two * u * u),
        gij_scalar: (T::one() - two * u) / k.c2(),
    })
}

// Radicand of tau_dot minus one: 2u + 2u^2 - beta^2 (1 - 2u).
fn radicand_excess<T: Real>(u: T, beta: T) -> T {
    let two = T::lit(2.0);
    two * u + two * u * u - beta * beta * (T::one() - two * u)
}

/// Proper-time rate `d tau / dt` for a particle at potential `phi` moving
/// with `speed`. Use [`tau_dot_deviation`] for anything phase-related.
pub fn tau_dot<T: Real>(phi: T, speed: T, k: &PhysicalConstants<T>) -> Result<T> {
    Ok(T::one() + tau_dot_deviation(phi, speed, k)?)
}

/// `tau_dot - 1`, evaluated as `x / (sqrt(1 + x) + 1)` from the expansion
/// terms.
pub fn tau_dot_deviation<T: Real>(phi: T, speed: T, k: &PhysicalConstants<T>) -> Result<T> {
    let u = check_weak_field(phi, k)?;
    let beta = check_speed(speed, k)?;
    let x = radicand_excess(u, beta);
    Ok(x / ((T::one() + x).sqrt() + T::one()))
}

/// `tau_dot(phi_ref + delta_phi, v) - tau_dot(phi_ref, v)` without
/// cancellation. The difference of the radicands factors exactly as
/// `2 du (1 + u + u_ref + beta^2)`.
pub fn tau_dot_shift<T: Real>(
    phi_ref: T,
    delta_phi: T,
    speed: T,
    k: &PhysicalConstants<T>,
) -> Result<T> {
    let u_ref = check_weak_field(phi_ref, k)?;
    let u = check_weak_field(phi_ref + delta_phi, k)?;
    let beta = check_speed(speed, k)?;
    let du = delta_phi / k.c2();
    let two = T::lit(2.0);
    let num = two * du * (T::one() + u + u_ref + beta * beta);
    let den = (T::one() + radicand_excess(u, beta)).sqrt()
        + (T::one() + radicand_excess(u_ref, beta)).sqrt();
    Ok(num / den)
}

/// Potential near the laboratory origin, linear in the height offset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearizedPotential<T> {
    /// `-GM/R` (m^2/s^2).
    pub phi_r: T,
    /// Effective acceleration (m/s^2).
    pub g: T,
    /// `g * delta_h` (m^2/s^2).
    pub delta_v: T,
    /// Upper bound on `|phi(R + dh) - phi(R) - g_src dh|` for the source
    /// potential, `g_src dh^2 / (R - |dh|)`.
    pub truncation_bound: T,
}

pub fn linearize_potential<T: Real>(
    field: &FieldConfig<T>,
    delta_h: T,
    k: &PhysicalConstants<T>,
) -> Result<LinearizedPotential<T>> {
    let ratio = delta_h.abs() / field.radius;
    if !(ratio.is_finite() && ratio < T::lit(HEIGHT_OFFSET_LIMIT)) {
        return Err(Error::HeightOffset {
            delta_h: delta_h.to_f64_lossy(),
            ratio: ratio.to_f64_lossy(),
            limit: HEIGHT_OFFSET_LIMIT,
        });
    }
    let g = field.g(k);
    Ok(LinearizedPotential {
        phi_r: field.potential_at_origin(k),
        g,
        delta_v: g * delta_h,
        truncation_bound: field.source_acceleration(k) * delta_h * delta_h
            / (field.radius - delta_h.abs()),
    })
}

/// Proper-time difference `delta_v * delta_t / c^2` accumulated over a hold
/// of `delta_t` at potential offset `delta_v`.
pub fn proper_time_difference<T: Real>(
    delta_v: T,
    delta_t: T,
    k: &PhysicalConstants<T>,
) -> Result<T> {
    if !(delta_t >= T::zero()) {
        return Err(Error::out_of_range(
            "delta_T",
            ">= 0",
            delta_t.to_f64_lossy(),
        ));
    }
    Ok(delta_v * delta_t / k.c2())
}
