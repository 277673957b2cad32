//! Scalar abstraction for the linear-algebra layer.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + NumAssignOps + Default + Debug + Display + Sum + Send + Sync + 'static
{
    /// Absolute tolerance used for structural checks (Hermiticity, unitarity).
    fn structural_tol() -> Self;

    /// Eigenvalues at or below this magnitude are treated as the null space.
    fn support_cutoff() -> Self;

    /// Eigenvalues below `-negativity_tol()` are genuine non-positivity.
    fn negativity_tol() -> Self;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f64 {
    fn structural_tol() -> Self {
        1e-10
    }
    fn support_cutoff() -> Self {
        1e-12
    }
    fn negativity_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn structural_tol() -> Self {
        1e-5
    }
    fn support_cutoff() -> Self {
        1e-6
    }
    fn negativity_tol() -> Self {
        1e-4
    }
}
