use std::fmt::{Debug, Display, LowerExp};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar type used by every physics kernel.
///
/// `f64` is the working precision wherever results meet a tolerance;
/// `f32` is supported for type-level genericity and smoke tests only.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Embed an `f64` constant, rounding if `T` is narrower.
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 embeds into Real")
}

/// Embed a small nonnegative integer exactly.
pub fn real_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("grid-scale usize embeds into Real")
}

/// Project to `f64` for reports and error messages.
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("Real projects to f64")
}
