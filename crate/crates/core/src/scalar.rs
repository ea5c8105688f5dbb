use num_traits::{Float, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display, LowerExp};

/// Real scalar the solver kit is generic over (`f32`, `f64`).
pub trait Scalar:
    'static + Float + NumAssign + FromPrimitive + Default + Debug + Display + LowerExp + Send + Sync
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar literal out of range")
    }

    fn from_index(k: usize) -> Self {
        Self::from_usize(k).expect("index not representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `x^n / n!` by repeated multiplication; `n` is at most a handful here.
#[inline]
pub fn taylor_monomial<T: Scalar>(x: T, n: usize) -> T {
    let mut acc = T::one();
    for k in 1..=n {
        acc = acc * x / T::from_index(k);
    }
    acc
}
