use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar accepted by the generic special functions.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a small integer.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }

    /// Machine epsilon as `f64`, used to size series and iteration counts.
    fn eps_f64() -> f64 {
        Self::epsilon().to_f64().unwrap_or(f64::EPSILON)
    }
}

macro_rules! impl_scalar {
    ($($t:ty),*) => {$(impl Scalar for $t {})*};
}

impl_scalar!(f32, f64);
