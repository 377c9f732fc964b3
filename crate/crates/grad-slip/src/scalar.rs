use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point type the assembly and eigen code is generic over.
pub trait Scalar: RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T: RealField + Copy + FromPrimitive + ToPrimitive> Scalar for T {}

#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Tolerance `t` tuned for f64, floored at a multiple of the working
/// precision so single precision gets a usable threshold.
#[inline]
pub(crate) fn tol<T: Scalar>(t: f64) -> T {
    let eps = to_f64(T::default_epsilon());
    lit(t.max(1e3 * eps))
}
