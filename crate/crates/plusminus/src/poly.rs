use std::ops::{Add, Mul, Neg, Sub};

use crate::ring::RingElem;

/// Dense univariate polynomial, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: RingElem> {
    coeffs: Vec<R>,
    zero: R,
}

impl<R: RingElem> Poly<R> {
    pub fn new(coeffs: Vec<R>, zero: R) -> Self {
        let zero = zero.zero_like();
        let mut p = Poly { coeffs, zero };
        p.trim();
        p
    }

    pub fn zero(proto: &R) -> Self {
        Poly { coeffs: Vec::new(), zero: proto.zero_like() }
    }

    pub fn constant(c: R) -> Self {
        let z = c.zero_like();
        Poly::new(vec![c], z)
    }

    /// The variable X.
    pub fn x(proto: &R) -> Self {
        Poly::new(vec![proto.zero_like(), proto.one_like()], proto.zero_like())
    }

    pub fn monomial(c: R, deg: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z.clone(); deg];
        v.push(c);
        Poly::new(v, z)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(RingElem::is_zero_elem) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.zero.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(self.zero.one_like());
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// f(g) by Horner's rule.
    pub fn compose(&self, g: &Poly<R>) -> Self {
        let mut acc = Poly::zero(&self.zero);
        for c in self.coeffs.iter().rev() {
            acc = acc * g.clone() + Poly::constant(c.clone());
        }
        acc
    }

    /// f(1 + X).
    pub fn shift_one(&self) -> Self {
        let one = self.zero.one_like();
        self.compose(&Poly::new(vec![one.clone(), one], self.zero.clone()))
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn map<S: RingElem>(&self, zero: &S, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect(), zero.zero_like())
    }
}

impl<R: RingElem> Add for Poly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::new(c, self.zero)
    }
}

impl<R: RingElem> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::new(c, self.zero)
    }
}

impl<R: RingElem> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.zero);
        }
        let mut c = vec![self.zero.clone(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c, self.zero)
    }
}

impl<R: RingElem> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|a| -a).collect(), self.zero)
    }
}

impl<R: RingElem> RingElem for Poly<R> {
    fn zero_like(&self) -> Self {
        Poly::zero(&self.zero)
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.zero.one_like())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Poly::constant(self.zero.from_i64_like(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn zp(v: &[i64]) -> Poly<BigInt> {
        Poly::new(v.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(0))
    }

    #[test]
    fn arithmetic() {
        let a = zp(&[1, 1]);
        assert_eq!(a.pow(3), zp(&[1, 3, 3, 1]));
        assert_eq!((a.clone() - a.clone()).degree(), None);
        assert_eq!(zp(&[0, 1]).shift_one(), zp(&[1, 1]));
        assert_eq!(zp(&[0, 0, 1]).compose(&zp(&[1, 1])), zp(&[1, 2, 1]));
    }
}
