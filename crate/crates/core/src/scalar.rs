//! The exact scalar abstraction shared by the table builders and the matrix
//! code. Implemented for `Ratio<T>` over any signed integer type (including
//! `BigInt`) and for residues in Z/p^e.
//!
//! Residues need their ring to build constants, so constants are produced
//! relative to an existing value (`zero_like`, `from_i64_like`) rather than
//! through `num_traits::Zero::zero()`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed};

use crate::exactnum::Residue;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64_like(&self, n: i64) -> Self;

    fn is_zero(&self) -> bool;

    /// Multiplicative inverse; `None` for non-units.
    fn try_inv(&self) -> Option<Self>;

    fn zero_like(&self) -> Self {
        self.from_i64_like(0)
    }

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + FromPrimitive + Debug,
{
    fn from_i64_like(&self, n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer fits the rational's base type"))
    }

    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn try_inv(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for Residue {
    fn from_i64_like(&self, n: i64) -> Self {
        self.ring().from_i64(n)
    }

    fn is_zero(&self) -> bool {
        Residue::is_zero(self)
    }

    fn try_inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ratio, Ring};

    #[test]
    fn constants_follow_the_context() {
        let r = Ring::new(7, 2).unwrap().from_u64(10);
        assert_eq!(r.from_i64_like(-1).value(), 48);
        assert_eq!(r.one_like().value(), 1);
        let q = ratio(3, 4);
        assert_eq!(q.from_i64_like(5), ratio(5, 1));
        assert_eq!(q.try_inv(), Some(ratio(4, 3)));
        assert_eq!(q.zero_like().try_inv(), None);
        assert_eq!(Ratio::new(2i64, 3).try_inv(), Some(Ratio::new(3, 2)));
    }

    #[test]
    fn non_units_have_no_inverse() {
        let r = Ring::new(5, 2).unwrap().from_u64(15);
        assert!(r.try_inv().is_none());
    }
}
