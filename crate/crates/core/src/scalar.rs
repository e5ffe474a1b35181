//! Integer coefficient types.
//!
//! Sequences and Euclidean integers are generic over the coefficient ring.
//! Fixed-width types panic on overflow through checked arithmetic; use
//! `BigInt` when values are unbounded.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Scalar: Clone + Ord + Debug + Display + Signed + FromPrimitive + Send + Sync + 'static {
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(b: &BigInt) -> Option<Self>;
}

macro_rules! fixed_scalar {
    ($t:ty, $to:ident) => {
        impl Scalar for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn from_bigint(b: &BigInt) -> Option<Self> {
                b.$to()
            }
        }
    };
}

fixed_scalar!(i64, to_i64);
fixed_scalar!(i128, to_i128);

impl Scalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(i64::from_bigint(&big), None);
        assert_eq!(i128::from_bigint(&big), Some(i64::MAX as i128 * 4));
        assert_eq!(<BigInt as Scalar>::from_bigint(&big), Some(big.clone()));
        assert_eq!((-5i64).to_bigint(), BigInt::from(-5));
    }
}
