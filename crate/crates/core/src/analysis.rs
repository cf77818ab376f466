//! Experiment planning and interpretation of measured visibilities.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interferometer::visibility_from_dilation;
use crate::physics::PhysicalConstants;
use crate::scalar::Real;

/// A candidate interferometer system with a two-level clock of angular
/// frequency `omega = dE / hbar`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemCatalogEntry<T> {
    pub name: String,
    pub clock_mechanism: String,
    /// rad/s
    pub omega: T,
    /// Demonstrated arm separation times hold time (m s).
    pub achieved_dhdt: T,
    /// Order-of-magnitude requirement as published, for comparison only.
    pub published_required_dhdt: Option<T>,
}

impl<T: Real> SystemCatalogEntry<T> {
    pub fn new(
        name: impl Into<String>,
        clock_mechanism: impl Into<String>,
        omega: T,
        achieved_dhdt: T,
    ) -> Result<Self> {
        if !(omega.is_finite() && omega > T::zero()) {
            return Err(Error::out_of_range(
                "omega",
                "finite and > 0",
                omega.to_f64_lossy(),
            ));
        }
        if !(achieved_dhdt.is_finite() && achieved_dhdt > T::zero()) {
            return Err(Error::out_of_range(
                "achieved dh*dT",
                "finite and > 0",
                achieved_dhdt.to_f64_lossy(),
            ));
        }
        Ok(SystemCatalogEntry {
            name: name.into(),
            clock_mechanism: clock_mechanism.into(),
            omega,
            achieved_dhdt,
            published_required_dhdt: None,
        })
    }
}

/// Atoms, electrons, molecules and neutrons with the commonly quoted clock
/// frequencies and demonstrated `dh dT`.
pub fn builtin_catalog<T: Real>() -> Vec<SystemCatalogEntry<T>> {
    [
        ("atoms", "hyperfine states", 1e15, 1e-5, 1e1),
        ("electrons", "spin precession", 1e13, 1e-6, 1e3),
        ("molecules", "vibrational modes", 1e12, 1e-8, 1e4),
        ("neutrons", "spin precession", 1e10, 1e-6, 1e6),
    ]
    .into_iter()
    .map(
        |(name, mech, omega, achieved, published)| SystemCatalogEntry {
            name: name.to_string(),
            clock_mechanism: mech.to_string(),
            omega: T::lit(omega),
            achieved_dhdt: T::lit(achieved),
            published_required_dhdt: Some(T::lit(published)),
        },
    )
    .collect()
}

/// `dh dT` at which a clock of frequency `omega` loses all visibility:
/// `pi c^2 / (g omega)` (m s).
pub fn required_dhdt<T: Real>(omega: T, g: T, k: &PhysicalConstants<T>) -> Result<T> {
    if !(omega.is_finite() && omega > T::zero()) {
        return Err(Error::out_of_range(
            "omega",
            "finite and > 0",
            omega.to_f64_lossy(),
        ));
    }
    if !(g.is_finite() && g > T::zero()) {
        return Err(Error::out_of_range("g", "finite and > 0", g.to_f64_lossy()));
    }
    Ok(T::PI() * k.c2() / (g * omega))
}

/// Smallest Gaussian proper-time width compatible with a visibility
/// measured to within `visibility_error` after a split `delta_tau`:
/// `|delta_tau| / sqrt(-8 ln(1 - dV))` (s).
pub fn sigma_tau_bound<T: Real>(delta_tau: T, visibility_error: T) -> Result<T> {
    if !delta_tau.is_finite() {
        return Err(Error::out_of_range(
            "delta_tau",
            "finite",
            delta_tau.to_f64_lossy(),
        ));
    }
    if !(visibility_error > T::zero() && visibility_error < T::one()) {
        return Err(Error::out_of_range(
            "visibility error",
            "in (0, 1)",
            visibility_error.to_f64_lossy(),
        ));
    }
    Ok(delta_tau.abs() / (-T::lit(8.0) * (-visibility_error).ln_1p()).sqrt())
}

/// Reading of a measured visibility against the quantum prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `V_m = 0`: proper time as a sharply defined quantum degree of freedom.
    SharpProperTimeDofDisproved,
    /// `0 < V_m < V_QM`: a quantum degree of freedom with finite width.
    DofWithUncertainty,
    /// `V_m = V_QM`: no degree of freedom, or a very broad one.
    NoDofOrBroad,
    /// `V_m > V_QM`: complementarity fails.
    ComplementarityViolation,
}

impl Verdict {
    pub fn describe(&self) -> &'static str {
        match self {
            Verdict::SharpProperTimeDofDisproved => {
                "proper time: quantum d.o.f., sharply defined (already excluded by measured gravitational phase shifts)"
            }
            Verdict::DofWithUncertainty => "proper time: quantum d.o.f. with uncertainty sigma_tau",
            Verdict::NoDofOrBroad => "proper time: not a quantum d.o.f. or very broad uncertainty",
            Verdict::ComplementarityViolation => {
                "quantum interferometric complementarity does not hold in the relativistic regime"
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutcomeClassification<T> {
    pub measured_visibility: T,
    pub predicted_visibility: T,
    pub visibility_error: T,
    pub verdict: Verdict,
    /// Lower bound on `sigma_tau` (s), only for [`Verdict::DofWithUncertainty`].
    pub sigma_tau_bound: Option<T>,
}

/// Classifies a measurement. Visibilities within `visibility_error` of each
/// other count as equal, and that band is checked first, so
/// `|V_m - V_QM| = dV` is read as agreement.
pub fn classify_outcome<T: Real>(
    measured: T,
    predicted: T,
    visibility_error: T,
    delta_tau: T,
) -> Result<OutcomeClassification<T>> {
    for (name, v) in [
        ("measured visibility", measured),
        ("predicted visibility", predicted),
    ] {
        if !(v >= T::zero() && v <= T::one()) {
            return Err(Error::out_of_range(name, "in [0, 1]", v.to_f64_lossy()));
        }
    }
    if !(visibility_error > T::zero() && visibility_error < T::one()) {
        return Err(Error::out_of_range(
            "visibility error",
            "in (0, 1)",
            visibility_error.to_f64_lossy(),
        ));
    }
    let verdict = if (measured - predicted).abs() <= visibility_error {
        Verdict::NoDofOrBroad
    } else if measured > predicted {
        Verdict::ComplementarityViolation
    } else if measured <= visibility_error {
        Verdict::SharpProperTimeDofDisproved
    } else {
        Verdict::DofWithUncertainty
    };
    let sigma_tau_bound = match verdict {
        Verdict::DofWithUncertainty => Some(sigma_tau_bound(delta_tau, visibility_error)?),
        _ => None,
    };
    Ok(OutcomeClassification {
        measured_visibility: measured,
        predicted_visibility: predicted,
        visibility_error,
        verdict,
        sigma_tau_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityReport<T> {
    pub name: String,
    pub omega: T,
    pub g: T,
    pub required_dhdt: T,
    pub achieved_dhdt: T,
    /// `required / achieved`.
    pub ratio: T,
    /// Proper-time split at the achieved `dh dT` (s).
    pub delta_tau: T,
    /// `pi / omega` (s).
    pub t_perp: T,
    pub predicted_visibility: T,
    /// `1 - V`, computed without cancellation.
    pub visibility_deficit: T,
    pub published_required_dhdt: Option<T>,
}

pub fn feasibility_report<T: Real>(
    entry: &SystemCatalogEntry<T>,
    g: T,
    k: &PhysicalConstants<T>,
) -> Result<FeasibilityReport<T>> {
    let required = required_dhdt(entry.omega, g, k)?;
    let delta_tau = g * entry.achieved_dhdt / k.c2();
    let t_perp = T::PI() / entry.omega;
    let predicted_visibility = visibility_from_dilation(delta_tau, t_perp)?.visibility;
    let x = entry.omega * g * entry.achieved_dhdt / (T::lit(2.0) * k.c2());
    let two = T::lit(2.0);
    // 1 - |cos x| as 2 sin^2(x/2) or 2 cos^2(x/2)
    let visibility_deficit = if x.cos() >= T::zero() {
        two * (x / two).sin().powi(2)
    } else {
        two * (x / two).cos().powi(2)
    };
    Ok(FeasibilityReport {
        name: entry.name.clone(),
        omega: entry.omega,
        g,
        required_dhdt: required,
        achieved_dhdt: entry.achieved_dhdt,
        ratio: required / entry.achieved_dhdt,
        delta_tau,
        t_perp,
        predicted_visibility,
        visibility_deficit,
        published_required_dhdt: entry.published_required_dhdt,
    })
}
