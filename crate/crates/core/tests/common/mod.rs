//! Random configuration generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use mzclock::{
    ClockSpec, ClockState, DensityMatrix, FieldConfig, InterferometerConfig, Ket,
    PhysicalConstants, RectangularLoop,
};
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_ket(rng: &mut impl Rng, dim: usize) -> Ket<f64> {
    let amps = (0..dim)
        .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Ket::normalized(amps).unwrap()
}

pub fn random_mixed(rng: &mut impl Rng, dim: usize) -> DensityMatrix<f64> {
    let n = rng.random_range(2..=4);
    let parts: Vec<_> = (0..n)
        .map(|_| (rng.random_range(0.05..1.0), random_ket(rng, dim)))
        .collect();
    DensityMatrix::mixture(&parts).unwrap()
}

pub fn random_state(rng: &mut impl Rng, dim: usize, mixed: bool) -> ClockState<f64> {
    if mixed {
        random_mixed(rng, dim).into()
    } else {
        random_ket(rng, dim).into()
    }
}

/// Sorted energies `hbar * w` with `w` drawn from `[0, omega_max)` on top of
/// a random ground offset.
pub fn random_spec(
    rng: &mut impl Rng,
    dim: usize,
    omega_max: f64,
    k: &PhysicalConstants<f64>,
) -> ClockSpec<f64> {
    let offset = rng.random_range(-omega_max..omega_max);
    let mut w: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..omega_max)).collect();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ClockSpec::new(w.into_iter().map(|x| k.hbar * (x + offset)).collect()).unwrap()
}

/// Interferometer inside every guard, with clock phases and dynamical phases
/// of order 1 to 1e3 rad.
pub fn random_config(rng: &mut impl Rng, dim: usize, mixed: bool) -> InterferometerConfig<f64> {
    let k = PhysicalConstants::codata();
    let delta_h: f64 = rng.random_range(0.05..1.0) * if rng.random_bool(0.2) { -1.0 } else { 1.0 };
    let delta_t = rng.random_range(0.01..2.0);
    let field = if rng.random_bool(0.5) {
        FieldConfig::planning()
    } else {
        FieldConfig::earth()
    };
    let g = field.g(&k);
    // clock phase differences up to ~4 pi
    let omega_max = 4.0 * PI * k.c2() / (g * delta_h.abs() * delta_t);
    let spec = random_spec(rng, dim, omega_max, &k);
    let state = random_state(rng, dim, mixed);
    let mass = 10f64.powf(rng.random_range(-36.0..-32.0));
    let mut geometry = RectangularLoop::new(delta_h, delta_t);
    if rng.random_bool(0.5) {
        geometry.rise_time = rng.random_range(1e-3..0.1);
    }
    if rng.random_bool(0.5) {
        geometry.horizontal_speed = rng.random_range(0.0..100.0);
    }
    InterferometerConfig::rectangular(mass, spec, state, &geometry, field, k)
        .unwrap()
        .with_phase_shift(rng.random_range(-PI..PI))
}

/// `ln(1/(1 - x))` by its power series, accurate for small `x`.
pub fn neg_log1m_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    let mut n = 1.0;
    while term / n > sum * 1e-18 || n < 2.0 {
        sum += term / n;
        term *= x;
        n += 1.0;
        if n > 10_000.0 {
            break;
        }
    }
    sum
}
