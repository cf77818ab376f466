use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Normalized state vector in the energy basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ket<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> Ket<T> {
    /// Accepts amplitudes that are already unit-norm.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state has no levels".into()));
        }
        if amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm: T = amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |s, x| s + x);
        if (norm - T::one()).abs() > T::exact_tol() {
            return Err(Error::InvalidState(format!(
                "squared norm {:e} differs from 1",
                norm.to_f64_lossy()
            )));
        }
        Ok(Ket { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm: T = amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |s, x| s + x)
            .sqrt();
        if !(norm.is_finite() && norm > T::zero()) {
            return Err(Error::InvalidState(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::normalized(
            amplitudes
                .iter()
                .map(|&a| Complex::new(a, T::zero()))
                .collect(),
        )
    }

    /// Energy eigenstate `|level>` of an `dim`-level clock.
    pub fn basis(dim: usize, level: usize) -> Result<Self> {
        if level >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: level + 1,
            });
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[level] = Complex::new(T::one(), T::zero());
        Ok(Ket { amplitudes })
    }

    /// Equal-weight superposition of all levels, `(|0> + ... + |N-1>)/sqrt(N)`.
    pub fn balanced(dim: usize) -> Result<Self> {
        Self::from_real(&vec![T::one(); dim])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex<T>>) -> Self {
        Ket { amplitudes }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket<T>) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| {
                s + a.conj() * b
            }))
    }
}

/// Provenance of a density matrix: the state it was prepared in, the phase
/// rates `E_n/hbar` it has been evolved under and for how long.
#[derive(Clone, Debug, PartialEq)]
struct Origin<T> {
    initial: Arc<[Complex<T>]>,
    rates: Option<Arc<[T]>>,
    elapsed: T,
}

/// Density operator in the energy basis, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
    #[serde(skip)]
    origin: Origin<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidState(format!(
                "density matrix needs {} entries for dimension {}, got {}",
                dim * dim,
                dim,
                data.len()
            )));
        }
        if data.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidState("non-finite matrix entry".into()));
        }
        let tol = T::exact_tol();
        for i in 0..dim {
            for j in i..dim {
                if (data[i * dim + j] - data[j * dim + i].conj()).norm() > tol {
                    return Err(Error::InvalidState(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let trace = (0..dim).fold(T::zero(), |s, i| s + data[i * dim + i].re);
        if (trace - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace {:e} differs from 1",
                trace.to_f64_lossy()
            )));
        }
        let (eigenvalues, _) = T::hermitian_eigen(dim, &data);
        if let Some(min) = eigenvalues.iter().copied().reduce(T::min) {
            if min < -T::psd_tol() {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {:e}",
                    min.to_f64_lossy()
                )));
            }
        }
        Ok(Self::prepared(dim, data))
    }

    fn prepared(dim: usize, data: Vec<Complex<T>>) -> Self {
        let origin = Origin {
            initial: data.clone().into(),
            rates: None,
            elapsed: T::zero(),
        };
        DensityMatrix { dim, data, origin }
    }

    /// Diagonal state with the given level populations.
    pub fn diagonal(populations: &[T]) -> Result<Self> {
        let dim = populations.len();
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for (i, &p) in populations.iter().enumerate() {
            data[i * dim + i] = Complex::new(p, T::zero());
        }
        Self::new(dim, data)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let p = T::one() / T::from_usize(dim.max(1)).expect("dimension fits");
        Self::diagonal(&vec![p; dim])
    }

    pub fn from_ket(ket: &Ket<T>) -> Self {
        let dim = ket.dim();
        let a = ket.amplitudes();
        let data = (0..dim * dim)
            .map(|ij| a[ij / dim] * a[ij % dim].conj())
            .collect();
        Self::prepared(dim, data)
    }

    /// Convex combination `sum_k w_k |psi_k><psi_k|`; weights are normalized.
    pub fn mixture(components: &[(T, Ket<T>)]) -> Result<Self> {
        let dim = components
            .first()
            .map(|(_, k)| k.dim())
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let total = components.iter().fold(T::zero(), |s, (w, _)| s + *w);
        if components.iter().any(|(w, _)| !(*w >= T::zero())) || !(total > T::zero()) {
            return Err(Error::InvalidState(
                "mixture weights must be non-negative with positive sum".into(),
            ));
        }
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for (w, ket) in components {
            if ket.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: ket.dim(),
                });
            }
            let a = ket.amplitudes();
            for (ij, d) in data.iter_mut().enumerate() {
                *d = *d + a[ij / dim] * a[ij % dim].conj() * (*w / total);
            }
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    /// Evolves under diagonal phase rates `E_n/hbar`. Entries pick up
    /// `exp(-i (w_m - w_n) tau)`, so only Bohr frequencies enter.
    pub(crate) fn evolved(&self, rates: &[T], tau: T) -> Self {
        let dim = self.dim;
        let data = (0..dim * dim)
            .map(|ij| {
                let (m, n) = (ij / dim, ij % dim);
                let angle = -(rates[m] - rates[n]) * tau;
                self.data[ij] * Complex::new(angle.cos(), angle.sin())
            })
            .collect();
        let origin = match &self.origin.rates {
            Some(r) if r.as_ref() == rates => Origin {
                initial: Arc::clone(&self.origin.initial),
                rates: Some(Arc::clone(r)),
                elapsed: self.origin.elapsed + tau,
            },
            Some(_) => Origin {
                initial: self.data.clone().into(),
                rates: Some(rates.into()),
                elapsed: tau,
            },
            None => Origin {
                initial: Arc::clone(&self.origin.initial),
                rates: Some(rates.into()),
                elapsed: self.origin.elapsed + tau,
            },
        };
        DensityMatrix { dim, data, origin }
    }

    /// Interference functional `Tr(rho0 U^dag(tau_a) U(tau_b))` between two
    /// states sharing an initial state `rho0`.
    pub(crate) fn interference(&self, other: &DensityMatrix<T>) -> Result<Complex<T>> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (a, b) = (&self.origin, &other.origin);
        if a.initial.as_ref() != b.initial.as_ref() {
            return Err(Error::NoCommonOrigin);
        }
        let rates = match (&a.rates, &b.rates) {
            (Some(ra), Some(rb)) if ra.as_ref() != rb.as_ref() => {
                return Err(Error::NoCommonOrigin)
            }
            (Some(r), _) | (_, Some(r)) => Some(Arc::clone(r)),
            (None, None) => None,
        };
        let dt = a.elapsed - b.elapsed;
        let dim = self.dim;
        Ok((0..dim).fold(Complex::new(T::zero(), T::zero()), |s, n| {
            let p = a.initial[n * dim + n].re;
            let angle = rates.as_ref().map_or(T::zero(), |r| r[n] * dt);
            s + Complex::new(angle.cos(), angle.sin()) * p
        }))
    }
}

/// Internal clock state: a ket or a density operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ClockState<T> {
    Pure(Ket<T>),
    Mixed(DensityMatrix<T>),
}

impl<T: Real> ClockState<T> {
    pub fn dim(&self) -> usize {
        match self {
            ClockState::Pure(k) => k.dim(),
            ClockState::Mixed(r) => r.dim(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, ClockState::Pure(_))
    }

    /// Level occupation probabilities.
    pub fn populations(&self) -> Vec<T> {
        match self {
            ClockState::Pure(k) => k.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
            ClockState::Mixed(r) => (0..r.dim()).map(|i| r.get(i, i).re).collect(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        match self {
            ClockState::Pure(k) => DensityMatrix::from_ket(k),
            ClockState::Mixed(r) => r.clone(),
        }
    }

    /// Squared norm (pure) or trace (mixed).
    pub fn trace(&self) -> T {
        self.populations().into_iter().fold(T::zero(), |s, p| s + p)
    }
}

impl<T: Real> From<Ket<T>> for ClockState<T> {
    fn from(k: Ket<T>) -> Self {
        ClockState::Pure(k)
    }
}

impl<T: Real> From<DensityMatrix<T>> for ClockState<T> {
    fn from(r: DensityMatrix<T>) -> Self {
        ClockState::Mixed(r)
    }
}
