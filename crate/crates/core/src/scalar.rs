//! Floating-point scalar abstraction.
//!
//! All physics in this crate is written against [`Real`], implemented for
//! `f32` and `f64`. Validation tolerances scale with the precision of the
//! type, and the Hermitian eigensolver needed for mixed states is delegated
//! to `nalgebra` per concrete type so that generic code never sees the
//! overlapping `Float`/`RealField` method sets.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable by the simulator: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Tolerance for exact invariants (norms, traces, Hermiticity).
    fn exact_tol() -> Self;

    /// Tolerance on negative eigenvalues when checking positivity.
    fn psd_tol() -> Self;

    /// Eigen-decomposition of a Hermitian matrix stored row-major.
    ///
    /// Returns eigenvalues and the matching orthonormal eigenvectors.
    fn hermitian_eigen(dim: usize, data: &[Complex<Self>]) -> (Vec<Self>, Vec<Vec<Complex<Self>>>);

    /// Converts an `f64` literal. Panics only if the value is unrepresentable,
    /// which cannot happen for finite literals with `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $exact:expr, $psd:expr) => {
        impl Real for $t {
            #[inline]
            fn exact_tol() -> Self {
                $exact
            }

            #[inline]
            fn psd_tol() -> Self {
                $psd
            }

            fn hermitian_eigen(
                dim: usize,
                data: &[Complex<Self>],
            ) -> (Vec<Self>, Vec<Vec<Complex<Self>>>) {
                let m = nalgebra::DMatrix::<Complex<$t>>::from_row_slice(dim, dim, data);
                let eig = m.symmetric_eigen();
                let values = eig.eigenvalues.iter().copied().collect();
                let vectors = eig
                    .eigenvectors
                    .column_iter()
                    .map(|c| c.iter().copied().collect())
                    .collect();
                (values, vectors)
            }
        }
    };
}

impl_real!(f64, 1e-12, 1e-10);
impl_real!(f32, 1e-5, 1e-4);
