//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point types the simulator can run on: `f32` or `f64`.
///
/// The two tolerance hooks scale the fixed checks (covariance symmetry,
/// uncertainty-principle eigenvalue floor) to the precision of the type.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Largest accepted asymmetry `|V_ij - V_ji|` of a covariance matrix.
    fn symmetry_tol() -> Self;
    /// Lowest accepted eigenvalue of `V - (i/2)Ω` in the physicality test.
    fn physicality_tol() -> Self;

    /// Lossless for the literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f64 {
    fn symmetry_tol() -> Self {
        1e-9
    }
    fn physicality_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn symmetry_tol() -> Self {
        1e-4
    }
    fn physicality_tol() -> Self {
        1e-4
    }
}

/// `1/2`, the vacuum quadrature variance.
#[inline]
pub(crate) fn half<T: Real>() -> T {
    T::lit(0.5)
}
