//! Scalar abstraction shared by the numeric modules.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the spectral and kinetic code is generic over.
///
/// Implemented for `f32` and `f64`. Statistical reductions are always
/// accumulated in `f64` regardless of the working precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; every finite constant in this crate fits.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }

    /// 2π in the working precision.
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}
