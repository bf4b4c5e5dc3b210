//! Exact scalar types accepted by the rate-region calculus.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// An exact ordered field. Floating point is deliberately not admitted:
/// corner membership tests must be exact.
pub trait Exact: Clone + Ord + Debug + Display + Num + Signed {
    fn ratio(num: i64, den: i64) -> Self;

    fn int(v: i64) -> Self {
        Self::ratio(v, 1)
    }

    fn level(v: usize) -> Self {
        Self::int(v as i64)
    }
}

impl Exact for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Exact for Ratio<i128> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

impl Exact for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
}
