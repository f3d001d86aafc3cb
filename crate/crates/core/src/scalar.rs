//! Numeric field abstraction shared by every formula in the crate.
//!
//! All of the moment, inversion and bound formulas are rational functions of
//! the inputs, so they are written once against [`Scalar`] and instantiated
//! with an exact type ([`crate::Rational`]) for verification work or with a
//! float for quick exploratory evaluation.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// A scalar field the crate can compute in.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact, so equality comparisons are meaningful.
    const EXACT: bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer is representable in every scalar type")
    }

    /// Equality up to the type's working precision. Exact types compare with `==`.
    fn approx_eq(&self, other: &Self) -> bool;

    /// `self <= other` up to working precision.
    fn approx_le(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

macro_rules! exact_ratio {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            const EXACT: bool = true;

            fn from_int(v: i64) -> Self {
                Ratio::from_integer(<$int>::from(v))
            }

            fn approx_eq(&self, other: &Self) -> bool {
                self == other
            }
        }
    )*};
}

exact_ratio!(i64, i128);

macro_rules! float_scalar {
    ($($float:ty => $tol:expr),*) => {$(
        impl Scalar for $float {
            const EXACT: bool = false;

            fn approx_eq(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $tol * scale
            }
        }
    )*};
}

float_scalar!(f64 => 1e-9, f32 => 1e-4);

/// Build an exact rational from numerator and denominator. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_types_compare_exactly() {
        assert!(ratio(1, 3).approx_eq(&ratio(2, 6)));
        assert!(!ratio(1, 3).approx_eq(&ratio(1, 3 + 1)));
        assert!(Ratio::<i64>::from_int(4).approx_eq(&Ratio::new(8, 2)));
    }

    #[test]
    fn floats_compare_with_tolerance() {
        assert!((0.1f64 + 0.2).approx_eq(&0.3));
        assert!(!1.0f64.approx_eq(&1.001));
        assert!(0.3f64.approx_le(&(0.1 + 0.2)));
    }
}
