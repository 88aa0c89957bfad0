use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exponent ring for Mal'cev coordinates and Magnus coefficients.
///
/// Blanket-implemented for every signed integer type with the listed
/// capabilities: `i32`, `i64`, `i128` and `num_bigint::BigInt`.
pub trait Exponent:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("exponent type cannot hold value")
    }
}

impl<T> Exponent for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
