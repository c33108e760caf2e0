//! Floating-point scalar abstraction shared by the numeric kernels.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar the numeric kernels are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Real")
    }

    /// Smallest pivot magnitude an LU factorization accepts before it reports a singular matrix.
    fn pivot_floor() -> Self;
}

impl Real for f32 {
    fn pivot_floor() -> Self {
        f32::MIN_POSITIVE
    }
}

impl Real for f64 {
    fn pivot_floor() -> Self {
        1e-300
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

/// Converts an `f64` complex value into the working precision.
pub fn cast_cx<T: Real>(z: Complex<f64>) -> Cx<T> {
    Complex::new(T::of(z.re), T::of(z.im))
}
