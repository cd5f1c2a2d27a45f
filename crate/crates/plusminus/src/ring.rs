//! Minimal commutative-ring interface shared by series, polynomials and group rings.
//!
//! Scalars that carry a runtime context (a prime, a precision, a field
//! descriptor) cannot produce a bare `zero()`, so constants are built from an
//! existing element instead.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num};

pub trait RingElem:
    Clone + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn from_i64_like(&self, n: i64) -> Self;
}

/// Context-free numeric types (`BigInt`, `BigRational`, `i128`, `f64`, ...).
pub trait PlainNumber: Num + Clone + Debug + Neg<Output = Self> + FromPrimitive {}

impl<T> PlainNumber for T where T: Num + Clone + Debug + Neg<Output = T> + FromPrimitive {}

impl<T: PlainNumber> RingElem for T {
    fn zero_like(&self) -> Self {
        T::zero()
    }
    fn one_like(&self) -> Self {
        T::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        T::from_i64(n).expect("integer fits the scalar type")
    }
}

/// Square-and-multiply with a context-carrying identity.
pub fn pow<R: RingElem>(x: &R, mut e: u64) -> R {
    let mut base = x.clone();
    let mut acc = x.one_like();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}
