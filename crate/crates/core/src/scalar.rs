//! Scalar abstraction shared by the algebra, kernel and filter layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the filter family is generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Largest exponent the complex Gaussian kernel may raise `e` to before
    /// the evaluation is reported as an overflow.
    const EXP_LIMIT: f64;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Scalar for f64 {
    const EXP_LIMIT: f64 = 700.0;
}

impl Scalar for f32 {
    const EXP_LIMIT: f64 = 80.0;
}
