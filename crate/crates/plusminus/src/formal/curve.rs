use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::is_prime;

/// Integral Weierstrass model y² + a1xy + a3y = x³ + a2x² + a4x + a6 at a prime p
/// of good supersingular reduction with a_p = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveParams {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub p: u64,
}

/// Named presets: "ss3" is y² = x³ - x, "ss23" is y² = x³ + 1.
pub fn preset(name: &str) -> Option<[i64; 5]> {
    match name {
        "ss3" => Some([0, 0, 0, -1, 0]),
        "ss23" => Some([0, 0, 0, 0, 1]),
        _ => None,
    }
}

impl CurveParams {
    /// Validates good reduction and a_p = 0 by counting points over F_p.
    pub fn new(a: [i64; 5], p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let e = CurveParams { a1: a[0], a2: a[1], a3: a[2], a4: a[3], a6: a[4], p };
        let disc = e.discriminant();
        if disc.is_zero() {
            return Err(Error::BadCurve("singular model".into()));
        }
        if (&disc % BigInt::from(p)).is_zero() {
            return Err(Error::BadCurve(format!(
                "discriminant {disc} is divisible by {p}: bad reduction or non-minimal model"
            )));
        }
        let ap = e.a_p();
        if ap != 0 {
            return Err(Error::BadCurve(format!("a_{p} = {ap}, not supersingular with a_p = 0")));
        }
        Ok(e)
    }

    pub fn from_preset(name: &str, p: u64) -> Result<Self> {
        let a = preset(name).ok_or_else(|| Error::InvalidParameter(format!("unknown curve preset {name}")))?;
        Self::new(a, p)
    }

    pub fn coefficients(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn discriminant(&self) -> BigInt {
        let [a1, a2, a3, a4, a6] = self.coefficients().map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// #Ẽ(F_p), including the point at infinity.
    pub fn point_count(&self) -> u64 {
        count_points(self.coefficients(), self.p)
    }

    pub fn a_p(&self) -> i64 {
        self.p as i64 + 1 - self.point_count() as i64
    }
}

/// Brute-force point count of the reduction of a Weierstrass model over F_p.
pub fn count_points(a: [i64; 5], p: u64) -> u64 {
    let p = p as i64;
    let r = |v: i64| v.rem_euclid(p);
    let [a1, a2, a3, a4, a6] = a.map(r);
    let mut count = 1;
    for x in 0..p {
        let rhs = r(r(r(x * x) * x) + r(a2 * r(x * x)) + r(a4 * x) + a6);
        for y in 0..p {
            let lhs = r(r(y * y) + r(a1 * r(x * y)) + r(a3 * y));
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

/// Sign-aware p-adic valuation of a nonzero integer.
pub fn bigint_valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    while (&y % &p).is_zero() {
        y /= &p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_examples() {
        assert_eq!(count_points([0, 0, 0, -1, 0], 3), 4);
        assert_eq!(count_points([0, 0, 0, 0, 1], 5), 6);
        assert!(CurveParams::from_preset("ss3", 3).is_ok());
        assert!(CurveParams::from_preset("ss23", 5).is_ok());
        assert!(CurveParams::from_preset("ss3", 5).is_err());
        assert!(CurveParams::from_preset("ss23", 3).is_err());
    }
}
