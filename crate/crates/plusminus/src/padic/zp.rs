use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::RingElem;

/// Largest admissible modulus p^N (leaves headroom for lazy additions).
const MODULUS_CAP: u128 = 1 << 62;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// The residue ring Z/p^N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zp {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl Zp {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        if prec == 0 {
            return Err(Error::InvalidParameter("precision N must be at least 1".into()));
        }
        let mut m: u128 = 1;
        for _ in 0..prec {
            m *= p as u128;
            if m >= MODULUS_CAP {
                return Err(Error::PrecisionTooLarge { p, n: prec });
            }
        }
        Ok(Zp { p, prec, modulus: m as u64 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same prime at another precision.
    pub fn with_prec(&self, prec: u32) -> Result<Self> {
        Zp::new(self.p, prec)
    }

    pub fn elem(&self, v: u64) -> PAdicInt {
        PAdicInt { value: v % self.modulus, ctx: *self }
    }

    pub fn from_i64(&self, v: i64) -> PAdicInt {
        let m = self.modulus as i128;
        let r = ((v as i128 % m) + m) % m;
        PAdicInt { value: r as u64, ctx: *self }
    }

    pub fn zero(&self) -> PAdicInt {
        self.elem(0)
    }
    pub fn one(&self) -> PAdicInt {
        self.elem(1)
    }

    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.prec {
            return 0;
        }
        self.p.pow(e)
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }
    #[inline]
    pub fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    /// p-adic valuation of a residue; `prec` for zero.
    #[inline]
    pub fn val_raw(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.prec;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit residue (extended Euclid).
    pub fn inv_raw(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        let m = self.modulus as i128;
        Some(((t0 % m + m) % m) as u64)
    }

    /// Exact division of `a` by p^e; the caller guarantees divisibility.
    #[inline]
    pub fn div_p_pow_raw(&self, a: u64, e: u32) -> u64 {
        a / self.p.pow(e)
    }

    /// Signed representative in (-p^N/2, p^N/2].
    pub fn signed(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }
}

/// An integer known modulo p^N.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    value: u64,
    ctx: Zp,
}

impl PAdicInt {
    pub fn value(&self) -> u64 {
        self.value
    }
    pub fn ctx(&self) -> Zp {
        self.ctx
    }

    /// `None` when the value is zero mod p^N.
    pub fn valuation(&self) -> Option<u32> {
        if self.value == 0 {
            None
        } else {
            Some(self.ctx.val_raw(self.value))
        }
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.ctx.p != 0
    }

    pub fn inverse(&self) -> Result<PAdicInt> {
        self.ctx
            .inv_raw(self.value)
            .map(|v| PAdicInt { value: v, ctx: self.ctx })
            .ok_or_else(|| Error::NotUnit(format!("{self:?}")))
    }

    pub fn pow(&self, e: u64) -> PAdicInt {
        PAdicInt { value: self.ctx.pow_raw(self.value, e), ctx: self.ctx }
    }

    /// Reduction to a lower precision.
    pub fn reduce(&self, ctx: Zp) -> PAdicInt {
        debug_assert_eq!(ctx.p, self.ctx.p);
        ctx.elem(self.value)
    }

    pub fn signed(&self) -> i128 {
        self.ctx.signed(self.value)
    }
}

impl fmt::Debug for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.ctx.p, self.ctx.prec)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for PAdicInt {
    type Output = PAdicInt;
    fn add(self, rhs: PAdicInt) -> PAdicInt {
        debug_assert_eq!(self.ctx, rhs.ctx);
        PAdicInt { value: self.ctx.add_raw(self.value, rhs.value), ctx: self.ctx }
    }
}

impl Sub for PAdicInt {
    type Output = PAdicInt;
    fn sub(self, rhs: PAdicInt) -> PAdicInt {
        debug_assert_eq!(self.ctx, rhs.ctx);
        PAdicInt { value: self.ctx.sub_raw(self.value, rhs.value), ctx: self.ctx }
    }
}

impl Mul for PAdicInt {
    type Output = PAdicInt;
    fn mul(self, rhs: PAdicInt) -> PAdicInt {
        debug_assert_eq!(self.ctx, rhs.ctx);
        PAdicInt { value: self.ctx.mul_raw(self.value, rhs.value), ctx: self.ctx }
    }
}

impl Neg for PAdicInt {
    type Output = PAdicInt;
    fn neg(self) -> PAdicInt {
        PAdicInt { value: self.ctx.neg_raw(self.value), ctx: self.ctx }
    }
}

impl RingElem for PAdicInt {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
    fn is_zero_elem(&self) -> bool {
        self.value == 0
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.ctx.from_i64(n)
    }
}

/// Teichmüller lift of a unit residue: the (p-1)-th root of unity congruent to `a` mod p.
pub fn teichmuller(a: u64, ctx: Zp) -> Result<PAdicInt> {
    if a % ctx.p == 0 {
        return Err(Error::NotUnit(format!("{a} mod {}", ctx.p)));
    }
    let mut x = ctx.elem(a);
    // x -> x^p converges p-adically, gaining a digit per step.
    for _ in 0..ctx.prec {
        x = x.pow(ctx.p);
    }
    Ok(x)
}

/// A generator of (Z/p)^x, the smallest one.
pub fn primitive_root(p: u64) -> u64 {
    let q = p - 1;
    let mut factors = Vec::new();
    let mut m = q;
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            factors.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let fp = Zp::new(p, 1).expect("odd prime");
    (2..p)
        .find(|&g| factors.iter().all(|&f| fp.pow_raw(g, q / f) != 1))
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_primes() {
        assert_eq!(Zp::new(2, 3), Err(Error::BadPrime(2)));
        assert_eq!(Zp::new(9, 3), Err(Error::BadPrime(9)));
        assert!(Zp::new(3, 40).is_err());
    }

    #[test]
    fn teichmuller_examples() {
        let z = Zp::new(5, 2).unwrap();
        assert_eq!(teichmuller(1, z).unwrap().value(), 1);
        assert_eq!(teichmuller(2, z).unwrap().value(), 7);
        let z7 = Zp::new(7, 3).unwrap();
        assert_eq!(teichmuller(6, z7).unwrap().value(), 342);
        assert!(teichmuller(10, z).is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn valuation_and_inverse() {
        let z = Zp::new(3, 5).unwrap();
        assert_eq!(z.elem(18).valuation(), Some(2));
        assert_eq!(z.zero().valuation(), None);
        let x = z.elem(7);
        assert_eq!((x * x.inverse().unwrap()).value(), 1);
        assert!(z.elem(6).inverse().is_err());
    }
}
