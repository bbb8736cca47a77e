use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Exact integer scalar usable by the matrix kernel.
///
/// Implemented for `i64`, `i128` and [`num_bigint::BigInt`]. The fixed-width types are
/// only safe when the caller knows coefficient growth stays bounded; everything that
/// feeds homology computations uses the arbitrary-precision instantiation.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every scalar")
    }

    fn from_order(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 does not fit scalar")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Send
        + Sync
        + 'static
{
}
