//! The natural-number scalar the cost-size domain is built on.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Num, ToPrimitive, Unsigned};

/// An exact unsigned number type. Implemented for `u32`, `u64`, `u128` and
/// `num_bigint::BigUint`; fixed-width types report overflow as an error.
pub trait Natural:
    Num
    + Unsigned
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn from_u64_lossless(n: u64) -> Option<Self> {
        <Self as FromPrimitive>::from_u64(n)
    }

    /// `self >= n` without converting `self` down.
    fn ge_u64(&self, n: u64) -> bool {
        match Self::from_u64_lossless(n) {
            Some(m) => *self >= m,
            None => false,
        }
    }
}

impl<T> Natural for T where
    T: Num
        + Unsigned
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
