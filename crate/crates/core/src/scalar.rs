//! Floating point abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the library computes in: `f32` or `f64`.
///
/// Besides the arithmetic bounds it carries the precision-dependent defaults
/// used by [`TolerancePolicy`](crate::TolerancePolicy) and
/// [`UnitVector`](crate::UnitVector), since a threshold that separates
/// structural zeros from real values in `f64` sits below the noise floor of
/// `f32`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Default threshold on |a_{k,l}| below which an entry counts as zero.
    fn default_zero_tol() -> Self;
    /// Default gap that separates two distinct angle values.
    fn default_angle_tol() -> Self;
    /// Allowed deviation of ||v||^2 from 1 for a unit vector.
    fn unit_norm_tol() -> Self;

    /// Lossy conversion from `f64`; every literal in the crate goes through here.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    fn default_zero_tol() -> Self {
        1e-9
    }
    fn default_angle_tol() -> Self {
        1e-7
    }
    fn unit_norm_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_zero_tol() -> Self {
        1e-4
    }
    fn default_angle_tol() -> Self {
        1e-3
    }
    fn unit_norm_tol() -> Self {
        1e-5
    }
}
