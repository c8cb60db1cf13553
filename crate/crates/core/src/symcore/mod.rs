//! Exact arithmetic: integer polynomials, the field Q(t), and truncated
//! multivariate series over it with Adams operators and plethystic Exp/Log.

mod poly;
mod ratfun;
mod series;

pub use poly::IntPoly;
pub use ratfun::RatFun;
pub use series::{graded_cmp, mobius, DimVector, MultiSeries};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for an exact rational from an integer.
pub fn rat(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}
