//! Numeric traits shared by the linear-algebra and probability code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Floating point scalar used by the Laplacian solves and the tree samplers.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant, panicking only if the type cannot represent finite values.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// A field in which probabilities can be combined exactly or approximately.
///
/// Implemented for `f32`, `f64` and `num_rational::Ratio<i64>` / `BigRational`,
/// so that Bernoulli rank sequences can be evaluated in exact arithmetic.
pub trait Field: Num + Clone + PartialOrd + FromPrimitive + Debug {
    fn of_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("representable") / Self::from_i64(den).expect("representable")
    }
}

impl<T> Field for T where T: Num + Clone + PartialOrd + FromPrimitive + Debug {}
