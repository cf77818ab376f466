//! Internal "clock" degree of freedom with a diagonal rest-frame Hamiltonian.

mod orthogonalization;
mod state;

use num_complex::Complex;
use serde::Serialize;

pub use orthogonalization::{
    orthogonalization_bound, orthogonalization_time, orthogonalization_time_with,
    search_orthogonalization_time, survival_amplitude, tightest_orthogonalization_bound,
    OrthogonalizationTime, SearchOptions,
};
pub use state::{ClockState, DensityMatrix, Ket};

use crate::error::{Error, Result};
use crate::physics::PhysicalConstants;
use crate::scalar::Real;

/// Energy spectrum `E_0 <= E_1 <= ...` (J) of a diagonal clock Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClockSpec<T> {
    energies: Vec<T>,
}

impl<T: Real> ClockSpec<T> {
    pub fn new(energies: Vec<T>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidSpectrum("no levels".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite energy".into()));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidSpectrum(
                "energies must be sorted ascending".into(),
            ));
        }
        Ok(ClockSpec { energies })
    }

    pub fn two_level(e0: T, e1: T) -> Result<Self> {
        Self::new(vec![e0, e1])
    }

    /// Two levels `0` and `hbar * omega`.
    pub fn from_angular_frequency(omega: T, k: &PhysicalConstants<T>) -> Result<Self> {
        if !(omega.is_finite() && omega >= T::zero()) {
            return Err(Error::out_of_range(
                "omega",
                "finite and >= 0",
                omega.to_f64_lossy(),
            ));
        }
        Self::new(vec![T::zero(), k.hbar * omega])
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn ground_energy(&self) -> T {
        self.energies[0]
    }

    /// Same spectrum with every level moved by `delta`.
    pub fn shifted(&self, delta: T) -> Result<Self> {
        Self::new(self.energies.iter().map(|&e| e + delta).collect())
    }

    /// `E_n / hbar` (rad/s).
    pub(crate) fn rates(&self, k: &PhysicalConstants<T>) -> Vec<T> {
        self.energies.iter().map(|&e| e / k.hbar).collect()
    }

    /// `(E_n - E_gr) / hbar` (rad/s).
    pub(crate) fn relative_rates(&self, k: &PhysicalConstants<T>) -> Vec<T> {
        let e0 = self.ground_energy();
        self.energies.iter().map(|&e| (e - e0) / k.hbar).collect()
    }

    fn check_dim(&self, state: &ClockState<T>) -> Result<()> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        Ok(())
    }
}

/// `<a|b> = modulus * exp(i phase_alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClockOverlap<T> {
    pub modulus: T,
    /// In `(-pi, pi]`.
    pub phase_alpha: T,
}

impl<T: Real> ClockOverlap<T> {
    pub(crate) fn from_complex(z: Complex<T>) -> Self {
        let mut phase = z.im.atan2(z.re);
        if phase <= -T::PI() {
            phase = T::PI();
        }
        ClockOverlap {
            modulus: z.norm().min(T::one()),
            phase_alpha: phase,
        }
    }
}

/// Evolves a clock state for proper time `tau` under `spec`.
pub fn evolve<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    tau: T,
    k: &PhysicalConstants<T>,
) -> Result<ClockState<T>> {
    spec.check_dim(state)?;
    let rates = spec.rates(k);
    Ok(match state {
        ClockState::Pure(ket) => ClockState::Pure(Ket::from_raw(
            ket.amplitudes()
                .iter()
                .zip(&rates)
                .map(|(a, &w)| {
                    let angle = -w * tau;
                    a * Complex::new(angle.cos(), angle.sin())
                })
                .collect(),
        )),
        ClockState::Mixed(rho) => ClockState::Mixed(rho.evolved(&rates, tau)),
    })
}

/// Overlap of two clock states.
///
/// Pure states give `<a|b>`. Mixed states must descend from a common
/// initial `rho0` under one spectrum; the result is then the interference
/// functional `Tr(rho0 U^dag(tau_a) U(tau_b))`, which is what tracing the
/// clock out of the path-clock state produces.
pub fn overlap<T: Real>(a: &ClockState<T>, b: &ClockState<T>) -> Result<ClockOverlap<T>> {
    let z = match (a, b) {
        (ClockState::Pure(x), ClockState::Pure(y)) => x.inner(y)?,
        (ClockState::Mixed(x), ClockState::Mixed(y)) => x.interference(y)?,
        _ => return Err(Error::IncomparableStates),
    };
    Ok(ClockOverlap::from_complex(z))
}

/// Trace distance `1/2 ||rho_a - rho_b||_1`.
pub fn trace_distance<T: Real>(a: &ClockState<T>, b: &ClockState<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if let (ClockState::Pure(x), ClockState::Pure(y)) = (a, b) {
        let m = x.inner(y)?.norm_sqr().min(T::one());
        return Ok((T::one() - m).sqrt());
    }
    let (ra, rb) = (a.to_density(), b.to_density());
    let diff: Vec<_> = ra
        .data()
        .iter()
        .zip(rb.data())
        .map(|(x, y)| x - y)
        .collect();
    let (eigenvalues, _) = T::hermitian_eigen(a.dim(), &diff);
    let sum = eigenvalues.into_iter().fold(T::zero(), |s, l| s + l.abs());
    Ok((sum / T::lit(2.0)).min(T::one()))
}

/// Which-path distinguishability of `state` evolved for `tau_a` versus
/// `tau_b`: the trace distance between the two clock states.
///
/// For pure states this is `sqrt(1 - |<a|b>|^2)`, evaluated as the pairwise
/// sum `4 p_m p_n sin^2((w_m - w_n)(tau_a - tau_b)/2)` so it stays accurate
/// when the overlap is close to 1.
pub fn path_distinguishability<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    tau_a: T,
    tau_b: T,
    k: &PhysicalConstants<T>,
) -> Result<T> {
    spec.check_dim(state)?;
    if let ClockState::Pure(_) = state {
        let p = state.populations();
        let w = spec.relative_rates(k);
        let dt = tau_a - tau_b;
        let half = T::lit(0.5);
        let mut sum = T::zero();
        for m in 0..p.len() {
            for n in m + 1..p.len() {
                sum = sum + T::lit(4.0) * p[m] * p[n] * ((w[m] - w[n]) * dt * half).sin().powi(2);
            }
        }
        let total = p.iter().fold(T::zero(), |s, &x| s + x);
        return Ok((sum / (total * total)).sqrt().min(T::one()));
    }
    trace_distance(
        &evolve(state, spec, tau_a, k)?,
        &evolve(state, spec, tau_b, k)?,
    )
}

/// `<H_clock>` in the given state.
pub fn mean_energy<T: Real>(state: &ClockState<T>, spec: &ClockSpec<T>) -> Result<T> {
    spec.check_dim(state)?;
    Ok(state
        .populations()
        .iter()
        .zip(spec.energies())
        .fold(T::zero(), |s, (&p, &e)| s + p * e))
}
