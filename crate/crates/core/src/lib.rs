pub mod cli;
pub mod error;
pub mod euclid;
pub mod fincode;
pub mod numerosity;
pub mod ordinal;
pub mod partition;
pub mod scalar;
pub mod sequence;

use num_bigint::BigInt;

pub use error::{Error, Result};
pub use euclid::{EuclideanInt, PartialSumExpr, Sign, SignWitness};
pub use fincode::FinOrdSet;
pub use numerosity::{Interval, PointSet};
pub use ordinal::{Ordinal, Universe};
pub use scalar::Scalar;
pub use sequence::StepSequence;

/// Euclidean integers with arbitrary-precision coefficients.
pub type EuclidInt = EuclideanInt<BigInt>;
/// Step sequences with arbitrary-precision values.
pub type Sequence = StepSequence<BigInt>;
