//! Scalar abstraction shared by the rules and the exact solver.
//!
//! Simulation always runs in `f64`. Rule evaluation, state-space
//! enumeration and absorption solving are generic so the same code runs in
//! floating point or in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, NumAssign, Signed, ToPrimitive};
use std::fmt::Debug;

/// Field-like number type usable for probabilities and expectations.
pub trait Scalar:
    Num + NumAssign + Signed + FromPrimitive + ToPrimitive + PartialOrd + Clone + Debug + Send + Sync + 'static
{
    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("integer representable in scalar type")
    }

    /// Ratio of two integers, exact for rational scalars.
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_usize_exact(num) / Self::from_usize_exact(den)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + NumAssign + Signed + FromPrimitive + ToPrimitive + PartialOrd + Clone + Debug + Send + Sync + 'static
{
}

/// Exact rational scalar.
pub type Exact = BigRational;

pub fn exact_from_int(v: i64) -> Exact {
    BigRational::from_integer(BigInt::from(v))
}
