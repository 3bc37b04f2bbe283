//! The real scalar field underneath every quaternion.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar usable as quaternion components.
///
/// Besides the arithmetic bounds, each precision carries the internal
/// thresholds the decompositions rely on. They are the only numbers that
/// have to change between `f32` and `f64`.
pub trait Real:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Largest off-slice mass a value may carry and still count as a member of `C_m`.
    fn slice_tol() -> Self;
    /// Relative distance under which two eigenvalues are treated as one cluster.
    fn cluster_tol() -> Self;
    /// Residual norm under which Gram–Schmidt declares a family rank deficient.
    fn rank_tol() -> Self;
    /// Default relative tolerance for contract checks (normality, residuals).
    fn check_tol() -> Self;

    /// Converts an `f64` literal. Every `Real` can represent (a rounding of) any `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    fn slice_tol() -> Self {
        1e-12
    }
    fn cluster_tol() -> Self {
        1e-8
    }
    fn rank_tol() -> Self {
        1e-12
    }
    fn check_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn slice_tol() -> Self {
        1e-5
    }
    fn cluster_tol() -> Self {
        1e-3
    }
    fn rank_tol() -> Self {
        1e-5
    }
    fn check_tol() -> Self {
        1e-4
    }
}
