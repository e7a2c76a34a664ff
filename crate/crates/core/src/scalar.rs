//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Numerical tolerances live on the scalar so that validation thresholds
/// scale with the available precision. The `f64` values are the ones the
/// library is specified against.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Max-abs deviation of `m - m†` accepted as Hermitian.
    fn hermitian_tol() -> Self;
    /// Accepted deviation of a state's trace from one.
    fn trace_tol() -> Self;
    /// Most negative eigenvalue accepted as roundoff on a PSD matrix.
    fn psd_tol() -> Self;
    /// Eigenvalues at or below this are treated as exact zeros in
    /// matrix functions and entropies.
    fn clamp_threshold() -> Self;
    /// Outcome probabilities below this are treated as impossible outcomes.
    fn probability_floor() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn hermitian_tol() -> Self {
        1e-10
    }
    fn trace_tol() -> Self {
        1e-10
    }
    fn psd_tol() -> Self {
        1e-10
    }
    fn clamp_threshold() -> Self {
        1e-12
    }
    fn probability_floor() -> Self {
        1e-14
    }
}

impl Real for f32 {
    fn hermitian_tol() -> Self {
        1e-5
    }
    fn trace_tol() -> Self {
        1e-5
    }
    fn psd_tol() -> Self {
        1e-5
    }
    fn clamp_threshold() -> Self {
        1e-6
    }
    fn probability_floor() -> Self {
        1e-7
    }
}
