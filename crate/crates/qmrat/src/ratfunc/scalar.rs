use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed};

/// Coefficient field for polynomials and rational functions.
///
/// Only exact fields make sense here: equality of rational functions is decided
/// by testing a polynomial for zero.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// Whether `self` should print with a leading minus sign.
    fn is_negative_display(&self) -> bool;

    /// Rational value, when the field embeds in Q.
    fn to_rational(&self) -> Option<BigRational>;
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn is_negative_display(&self) -> bool {
        self.is_negative()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}
