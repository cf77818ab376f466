use num_complex::Complex;
use serde::Serialize;

use super::{ClockSpec, ClockState};
use crate::error::{Error, Result};
use crate::physics::PhysicalConstants;
use crate::scalar::Real;

/// Outcome of an orthogonalization-time computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum OrthogonalizationTime<T> {
    /// The state reaches an orthogonal one after this proper time (s).
    Finite(T),
    /// Provably never orthogonal: a single populated energy, or one energy
    /// carrying more than half the weight.
    Never,
    /// No zero found up to `window` (s); the true value, if any, exceeds it.
    NotWithin { window: T },
}

impl<T: Real> OrthogonalizationTime<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            OrthogonalizationTime::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// `1/t_perp`, zero when no finite time exists.
    pub fn rate(&self) -> T {
        self.finite().map_or(T::zero(), |t| T::one() / t)
    }
}

/// Grid parameters for the numerical zero search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Overlap modulus counted as zero.
    pub tolerance: f64,
    /// Scan window in periods of the smallest Bohr frequency.
    pub periods: f64,
    /// Grid step is `pi / (steps_per_half_period * w_max)`.
    pub steps_per_half_period: f64,
    /// Hard cap on grid points; the window shrinks to fit.
    pub max_grid_points: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            tolerance: 1e-9,
            periods: 1e4,
            steps_per_half_period: 50.0,
            max_grid_points: 1 << 22,
        }
    }
}

/// Populations merged over degenerate levels, with rates relative to the
/// lowest populated level. Sorted by rate.
fn populated_levels<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    k: &PhysicalConstants<T>,
) -> Vec<(T, T)> {
    let rates = spec.relative_rates(k);
    let scale = rates.last().copied().unwrap_or(T::zero()).abs();
    let merge_tol = scale * T::epsilon() * T::lit(16.0);
    let mut levels: Vec<(T, T)> = Vec::new();
    for (w, p) in rates.into_iter().zip(state.populations()) {
        if p <= T::zero() {
            continue;
        }
        match levels.last_mut() {
            Some(last) if (w - last.0).abs() <= merge_tol => last.1 = last.1 + p,
            _ => levels.push((w, p)),
        }
    }
    if let Some(&(w0, _)) = levels.first() {
        for l in &mut levels {
            l.0 = l.0 - w0;
        }
    }
    levels
}

/// Survival amplitude `sum_n p_n exp(-i w_n tau)` with `w_n` relative to the
/// ground level. Its modulus is the overlap between the state and itself
/// evolved for `tau` (pure), or the interference functional (mixed).
pub fn survival_amplitude<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    tau: T,
    k: &PhysicalConstants<T>,
) -> Result<Complex<T>> {
    if state.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: state.dim(),
        });
    }
    Ok(amplitude(&populated_levels(state, spec, k), tau))
}

fn amplitude<T: Real>(levels: &[(T, T)], tau: T) -> Complex<T> {
    levels
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |s, &(w, p)| {
            let a = -w * tau;
            s + Complex::new(a.cos(), a.sin()) * p
        })
}

enum Shortcut<T> {
    Never,
    HalfPeriod(T),
    Search,
}

fn shortcut<T: Real>(levels: &[(T, T)], tol: T) -> Shortcut<T> {
    if levels.len() < 2 {
        return Shortcut::Never;
    }
    // |A| >= p_max - (1 - p_max)
    let p_max = levels.iter().map(|l| l.1).fold(T::zero(), T::max);
    let total = levels.iter().fold(T::zero(), |s, l| s + l.1);
    if p_max - (total - p_max) > tol {
        return Shortcut::Never;
    }
    if levels.len() == 2 && (levels[0].1 - levels[1].1).abs() <= tol {
        return Shortcut::HalfPeriod(T::PI() / (levels[1].0 - levels[0].0));
    }
    Shortcut::Search
}

fn check_dim<T: Real>(state: &ClockState<T>, spec: &ClockSpec<T>) -> Result<()> {
    if state.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: state.dim(),
        });
    }
    Ok(())
}

/// Minimal proper time for the state to become orthogonal to itself.
///
/// Two equally populated energies give the closed form `pi hbar / dE`;
/// other states go through [`search_orthogonalization_time`].
pub fn orthogonalization_time<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    k: &PhysicalConstants<T>,
) -> Result<OrthogonalizationTime<T>> {
    orthogonalization_time_with(state, spec, k, &SearchOptions::default())
}

pub fn orthogonalization_time_with<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    k: &PhysicalConstants<T>,
    opts: &SearchOptions,
) -> Result<OrthogonalizationTime<T>> {
    check_dim(state, spec)?;
    let levels = populated_levels(state, spec, k);
    match shortcut(&levels, T::lit(opts.tolerance)) {
        Shortcut::Never => Ok(OrthogonalizationTime::Never),
        Shortcut::HalfPeriod(t) => Ok(OrthogonalizationTime::Finite(t)),
        Shortcut::Search => Ok(scan(&levels, opts)),
    }
}

/// Grid scan for the first zero of the survival amplitude, skipping the
/// two-level closed form. Only the provable `Never` cases short-circuit.
pub fn search_orthogonalization_time<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    k: &PhysicalConstants<T>,
    opts: &SearchOptions,
) -> Result<OrthogonalizationTime<T>> {
    check_dim(state, spec)?;
    let levels = populated_levels(state, spec, k);
    match shortcut(&levels, T::lit(opts.tolerance)) {
        Shortcut::Never => Ok(OrthogonalizationTime::Never),
        _ => Ok(scan(&levels, opts)),
    }
}

// Steps between exact re-evaluations of the phasor recurrence.
const REFRESH: usize = 256;

fn scan<T: Real>(levels: &[(T, T)], opts: &SearchOptions) -> OrthogonalizationTime<T> {
    let w_max = levels.last().expect("at least two levels").0;
    let w_min = levels
        .windows(2)
        .map(|p| p[1].0 - p[0].0)
        .fold(T::infinity(), T::min);
    let step = T::PI() / (T::lit(opts.steps_per_half_period) * w_max);
    let window = T::lit(opts.periods) * T::TAU() / w_min;
    let wanted = (window / step).ceil().to_f64_lossy();
    let points = if wanted.is_finite() {
        (wanted as usize).min(opts.max_grid_points)
    } else {
        opts.max_grid_points
    };
    let window = step * T::from_usize(points).expect("grid size fits");
    let tol = T::lit(opts.tolerance);
    // |A| is Lipschitz with constant w_max, so any zero lies within one step
    // of a grid point whose modulus is at most w_max * step.
    let catch = w_max * step * T::lit(1.01);

    let rotors: Vec<Complex<T>> = levels
        .iter()
        .map(|&(w, _)| {
            let a = -w * step;
            Complex::new(a.cos(), a.sin())
        })
        .collect();
    let mut phasors: Vec<Complex<T>> = levels
        .iter()
        .map(|&(_, p)| Complex::new(p, T::zero()))
        .collect();

    let modulus_at = |j: usize, phasors: &mut [Complex<T>]| -> T {
        if j.is_multiple_of(REFRESH) {
            let t = step * T::from_usize(j).expect("grid index fits");
            for (z, &(w, p)) in phasors.iter_mut().zip(levels) {
                let a = -w * t;
                *z = Complex::new(a.cos(), a.sin()) * p;
            }
        }
        phasors
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |s, z| s + z)
            .norm()
    };

    let mut prev2 = T::infinity();
    let mut prev1 = modulus_at(0, &mut phasors);
    for j in 1..=points {
        for (z, r) in phasors.iter_mut().zip(&rotors) {
            *z = *z * r;
        }
        let cur = modulus_at(j, &mut phasors);
        // prev1 sits at grid index j - 1
        if prev1 <= prev2 && prev1 <= cur && prev1 <= catch {
            let centre = T::from_usize(j - 1).expect("grid index fits") * step;
            let lo = (centre - step).max(T::zero());
            let (t, m) = golden_minimum(levels, lo, centre + step);
            if m < tol {
                return OrthogonalizationTime::Finite(t);
            }
        }
        prev2 = prev1;
        prev1 = cur;
    }
    OrthogonalizationTime::NotWithin { window }
}

fn golden_minimum<T: Real>(levels: &[(T, T)], mut a: T, mut b: T) -> (T, T) {
    let f = |t: T| amplitude(levels, t).norm();
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= T::epsilon() * b.abs() {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    let t = (a + b) / T::lit(2.0);
    (t, f(t))
}

/// Moment bound `1/t_perp <= 2^(1/alpha) / (pi hbar) <(H - E_gr)^alpha>^(1/alpha)`
/// (Hz), evaluated in frequency units to stay clear of underflow.
pub fn orthogonalization_bound<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    alpha: T,
    k: &PhysicalConstants<T>,
) -> Result<T> {
    if !(alpha.is_finite() && alpha > T::zero()) {
        return Err(Error::out_of_range(
            "moment order alpha",
            "finite and > 0",
            alpha.to_f64_lossy(),
        ));
    }
    check_dim(state, spec)?;
    let moment = spec
        .relative_rates(k)
        .into_iter()
        .zip(state.populations())
        .fold(T::zero(), |s, (w, p)| s + p.max(T::zero()) * w.powf(alpha));
    if moment <= T::zero() {
        return Ok(T::zero());
    }
    let inv = T::one() / alpha;
    Ok(T::lit(2.0).powf(inv) / T::PI() * moment.powf(inv))
}

/// Smallest bound over the supplied moment orders, with the order attaining it.
pub fn tightest_orthogonalization_bound<T: Real>(
    state: &ClockState<T>,
    spec: &ClockSpec<T>,
    alphas: &[T],
    k: &PhysicalConstants<T>,
) -> Result<(T, T)> {
    let mut best: Option<(T, T)> = None;
    for &alpha in alphas {
        let b = orthogonalization_bound(state, spec, alpha, k)?;
        if best.is_none_or(|(_, cur)| b < cur) {
            best = Some((alpha, b));
        }
    }
    best.ok_or_else(|| Error::out_of_range("number of moment orders", ">= 1", 0.0))
}
