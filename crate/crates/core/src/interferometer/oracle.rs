//! Independent evaluation of the interferometer by explicit state-vector
//! propagation through beam splitters, arms and phase shifter.
//!
//! Visibility is taken from its definition, `(max P - min P)/(max P + min P)`
//! over a sweep of the phase shifter, rather than from the clock overlap.
//! Mixed clocks are decomposed into eigenvectors and the runs are combined
//! with their weights.

use num_complex::Complex;

use super::{arm_phases, energy_correction_summary, InterferenceResult, InterferometerConfig};
use crate::clock::ClockState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest clock dimension the oracle accepts.
pub const ORACLE_DIMENSION_CAP: usize = 16;
/// Number of phase-shifter samples before local refinement.
pub const ORACLE_PHASE_GRID: usize = 10_000;

type C<T> = Complex<T>;

/// Path (qubit) and clock amplitudes, index `path * dim + level`.
struct Joint<T> {
    dim: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> Joint<T> {
    /// Particle entering in mode `r_2` with the given clock state.
    fn input(clock: &[C<T>]) -> Self {
        let dim = clock.len();
        let mut amps = vec![C::new(T::zero(), T::zero()); 2 * dim];
        amps[dim..].copy_from_slice(clock);
        Joint { dim, amps }
    }

    /// Applies a 2x2 unitary on the path qubit.
    fn apply_path(&mut self, u: &[[C<T>; 2]; 2]) {
        let d = self.dim;
        for n in 0..d {
            let (a, b) = (self.amps[n], self.amps[d + n]);
            self.amps[n] = u[0][0] * a + u[0][1] * b;
            self.amps[d + n] = u[1][0] * a + u[1][1] * b;
        }
    }

    /// Multiplies arm `path` by a scalar phase and a diagonal clock unitary.
    fn apply_arm(&mut self, path: usize, scalar: C<T>, clock_diag: &[C<T>]) {
        let d = self.dim;
        for (a, u) in self.amps[path * d..(path + 1) * d]
            .iter_mut()
            .zip(clock_diag)
        {
            *a = *a * scalar * u;
        }
    }

    fn port_probability(&self, path: usize) -> T {
        let d = self.dim;
        self.amps[path * d..(path + 1) * d]
            .iter()
            .fold(T::zero(), |s, a| s + a.norm_sqr())
    }

    fn arm(&self, path: usize) -> &[C<T>] {
        &self.amps[path * self.dim..(path + 1) * self.dim]
    }
}

fn beam_splitter<T: Real>() -> [[C<T>; 2]; 2] {
    let s = T::FRAC_1_SQRT_2();
    let z = T::zero();
    [[C::new(s, z), C::new(z, s)], [C::new(z, s), C::new(s, z)]]
}

fn cis<T: Real>(angle: T) -> C<T> {
    C::new(angle.cos(), angle.sin())
}

/// Weighted pure components of the clock state.
fn components<T: Real>(state: &ClockState<T>) -> Vec<(T, Vec<C<T>>)> {
    match state {
        ClockState::Pure(k) => vec![(T::one(), k.amplitudes().to_vec())],
        ClockState::Mixed(rho) => {
            let (values, vectors) = T::hermitian_eigen(rho.dim(), rho.data());
            values
                .into_iter()
                .zip(vectors)
                .filter(|(w, _)| *w > T::zero())
                .collect()
        }
    }
}

/// Weight of one clock component and its two arm amplitude vectors.
type ArmRun<T> = (T, Vec<C<T>>, Vec<C<T>>);

/// Arm amplitudes after the first beam splitter and path propagation, one
/// pair per clock component; the phase shifter is not yet applied.
struct Propagated<T> {
    runs: Vec<ArmRun<T>>,
}

impl<T: Real> Propagated<T> {
    /// Explicit joint state after the phase shifter and the second splitter.
    fn output(&self, phase_shift: T) -> Vec<(T, Joint<T>)> {
        let bs = beam_splitter();
        self.runs
            .iter()
            .map(|(w, a1, a2)| {
                let dim = a1.len();
                let mut amps = Vec::with_capacity(2 * dim);
                amps.extend_from_slice(a1);
                amps.extend_from_slice(a2);
                let mut j = Joint { dim, amps };
                let ones = vec![C::new(T::one(), T::zero()); dim];
                j.apply_arm(1, cis(phase_shift), &ones);
                j.apply_path(&bs);
                (*w, j)
            })
            .collect()
    }

    /// Probability of the `D_+` port (output mode `r_1`).
    fn p_plus(&self, phase_shift: T) -> T {
        self.output(phase_shift)
            .iter()
            .fold(T::zero(), |s, (w, j)| s + *w * j.port_probability(0))
    }

    fn probabilities(&self, phase_shift: T) -> (T, T) {
        self.output(phase_shift)
            .iter()
            .fold((T::zero(), T::zero()), |(p, m), (w, j)| {
                (
                    p + *w * j.port_probability(0),
                    m + *w * j.port_probability(1),
                )
            })
    }
}

fn golden<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
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
    f((a + b) / T::lit(2.0))
}

/// Extremes of `P_+` over the phase shifter: grid, then golden-section
/// refinement around the best grid points.
fn extremes<T: Real>(prop: &Propagated<T>) -> (T, T) {
    let n = ORACLE_PHASE_GRID;
    let step = T::TAU() / T::from_usize(n).expect("grid fits");
    let samples: Vec<T> = (0..n)
        .map(|i| prop.p_plus(step * T::from_usize(i).expect("grid fits")))
        .collect();
    let (mut i_max, mut i_min) = (0, 0);
    for (i, &p) in samples.iter().enumerate() {
        if p > samples[i_max] {
            i_max = i;
        }
        if p < samples[i_min] {
            i_min = i;
        }
    }
    let at = |i: usize| step * T::from_usize(i).expect("grid fits");
    let max = golden(|x| -prop.p_plus(x), at(i_max) - step, at(i_max) + step);
    let min = golden(|x| prop.p_plus(x), at(i_min) - step, at(i_min) + step);
    ((-max).max(samples[i_max]), min.min(samples[i_min]))
}

fn trace_distance_from_arms<T: Real>(runs: &[ArmRun<T>]) -> T {
    let dim = runs[0].1.len();
    // conditional clock states on each arm, each arm carries weight 1/2
    let mut diff = vec![C::new(T::zero(), T::zero()); dim * dim];
    for (w, a1, a2) in runs {
        let scale = *w * T::lit(2.0);
        for r in 0..dim {
            for c in 0..dim {
                diff[r * dim + c] =
                    diff[r * dim + c] + (a1[r] * a1[c].conj() - a2[r] * a2[c].conj()) * scale;
            }
        }
    }
    let (values, _) = T::hermitian_eigen(dim, &diff);
    let sum = values.into_iter().fold(T::zero(), |s, l| s + l.abs());
    (sum / T::lit(2.0)).min(T::one())
}

/// Brute-force evaluation of the interferometer, for cross-checking
/// [`super::interfere`].
pub fn brute_force_oracle<T: Real>(cfg: &InterferometerConfig<T>) -> Result<InterferenceResult<T>> {
    let dim = cfg.clock.dim();
    if dim > ORACLE_DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: ORACLE_DIMENSION_CAP,
        });
    }
    let arms = arm_phases(cfg)?;
    let k = &cfg.constants;
    let clock_unitary = |tau: T| -> Vec<C<T>> {
        cfg.clock
            .energies()
            .iter()
            .map(|&e| cis(-(e / k.hbar) * tau))
            .collect()
    };
    let u1 = clock_unitary(arms.first.proper_time.dilation);
    let u2 = clock_unitary(arms.second.proper_time.dilation);
    let phase1 = cis(-arms.first.dynamical_phase);
    let phase2 = cis(-arms.second.dynamical_phase);

    let bs = beam_splitter();
    let runs: Vec<_> = components(&cfg.clock_initial)
        .into_iter()
        .map(|(w, psi)| {
            let mut j = Joint::input(&psi);
            j.apply_path(&bs);
            j.apply_arm(0, phase1, &u1);
            j.apply_arm(1, phase2, &u2);
            (w, j.arm(0).to_vec(), j.arm(1).to_vec())
        })
        .collect();
    let total: T = runs.iter().fold(T::zero(), |s, r| s + r.0);
    let runs: Vec<_> = runs
        .into_iter()
        .map(|(w, a, b)| (w / total, a, b))
        .collect();
    let prop = Propagated { runs };

    let (p_plus, p_minus) = prop.probabilities(cfg.phase_shift);
    let (max, min) = extremes(&prop);
    let visibility = ((max - min) / (max + min)).max(T::zero()).min(T::one());

    // overlap of the arm clock states with dynamical phases removed
    let z = prop
        .runs
        .iter()
        .fold(C::new(T::zero(), T::zero()), |s, (w, a1, a2)| {
            let inner = a1
                .iter()
                .zip(a2)
                .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| {
                    acc + x.conj() * y
                });
            s + inner * *w * T::lit(2.0)
        });
    // arm 1 carries i e^{-i Phi_1}, arm 2 e^{-i Phi_2}
    let z = z * C::new(T::zero(), T::one()) * phase1 * phase2.conj();
    let alpha = {
        let a = z.im.atan2(z.re);
        if a <= -T::PI() {
            T::PI()
        } else {
            a
        }
    };
    let (mean_energy_correction, energy_correction_asymmetric) = energy_correction_summary(
        arms.first.mean_energy_correction,
        arms.second.mean_energy_correction,
    );
    Ok(InterferenceResult {
        p_plus,
        p_minus,
        visibility,
        distinguishability: trace_distance_from_arms(&prop.runs),
        delta_phi: arms.first.dynamical_phase - arms.second.dynamical_phase,
        alpha,
        delta_tau: arms.first.proper_time.dilation - arms.second.proper_time.dilation,
        mean_energy_correction,
        energy_correction_asymmetric,
    })
}
