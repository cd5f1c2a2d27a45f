use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::curve::CurveParams;
use crate::error::{Error, Result};
use crate::ring::RingElem;
use crate::series::{BiSeries, TruncSeries};

/// w(z) = -1/y in terms of z = -x/y, through degree `deg`, over any ring containing the a_i.
pub fn w_series<R: RingElem>(a: [i64; 5], deg: usize, proto: &R) -> TruncSeries<R> {
    let [a1, a2, a3, a4, a6] = a.map(|c| proto.from_i64_like(c));
    let z = TruncSeries::var(deg, proto);
    let z2 = z.clone() * z.clone();
    let z3 = z2.clone() * z.clone();
    let mut w = z3.clone();
    // Each pass fixes at least one more degree.
    for _ in 0..deg {
        let w2 = w.clone() * w.clone();
        let w3 = w2.clone() * w.clone();
        w = z3.clone()
            + (z.clone() * w.clone()).scale(&a1)
            + (z2.clone() * w.clone()).scale(&a2)
            + w2.scale(&a3)
            + (z.clone() * w2).scale(&a4)
            + w3.scale(&a6);
    }
    w
}

/// Formal group law by the chord construction; integral over Z[a_i].
pub fn group_law_generic<R: RingElem>(a: [i64; 5], deg: usize, proto: &R) -> BiSeries<R> {
    let [a1, a2, a3, a4, a6] = a.map(|c| proto.from_i64_like(c));
    let w = w_series(a, deg + 1, proto);
    let one = proto.one_like();

    // λ = (w(z2) - w(z1))/(z2 - z1) = Σ w_n Σ_{i+j=n-1} z1^i z2^j
    let mut lambda = BiSeries::zero(deg, proto);
    for n in 3..=deg + 1 {
        let c = w.coeff(n);
        if c.is_zero_elem() {
            continue;
        }
        for i in 0..n {
            lambda.set_coeff(i, n - 1 - i, lambda.coeff(i, n - 1 - i).clone() + c.clone());
        }
    }
    let x = BiSeries::from_x(&TruncSeries::var(deg, proto), deg);
    let y = BiSeries::from_y(&TruncSeries::var(deg, proto), deg);
    let w1 = BiSeries::from_x(&w.truncate(deg), deg);
    let nu = w1 - lambda.clone() * x.clone();

    let l2 = lambda.clone() * lambda.clone();
    let l3 = l2.clone() * lambda.clone();
    let num = lambda.scale(&a1)
        + nu.scale(&a2)
        + l2.scale(&a3)
        + (lambda.clone() * nu.clone()).scale(&(a4.clone() + a4.clone()))
        + (l2.clone() * nu).scale(&(a6.clone() + a6.clone() + a6.clone()));
    let den = BiSeries::constant(one.clone(), deg) + lambda.scale(&a2) + l2.scale(&a4) + l3.scale(&a6);
    let z3 = -x - y - num * den.inverse_with(&one);

    // Inversion on the curve: i(z) = z / (a1 z + a3 w(z) - 1).
    let zs = TruncSeries::var(deg, proto);
    let denom = zs.scale(&a1) + w.truncate(deg).scale(&a3) - TruncSeries::constant(one.clone(), deg);
    let inv = zs * denom.inverse_with(&(-one));
    z3.substitute_into(&inv)
}

/// F(X, Y) with integer coefficients.
pub fn formal_group_law(e: &CurveParams, deg: usize) -> Result<BiSeries<BigInt>> {
    if deg < 2 {
        return Err(Error::InvalidParameter("formal group law needs degree ≥ 2".into()));
    }
    Ok(group_law_generic(e.coefficients(), deg, &BigInt::zero()))
}

/// Invariant differential ω(z)/dz = 1 + a1 z + ..., through degree `deg`.
pub fn invariant_differential(e: &CurveParams, deg: usize) -> TruncSeries<BigRational> {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let zero = q(0);
    let [a1, _, a3, _, _] = e.coefficients();
    let w = w_series(e.coefficients(), deg + 4, &zero);
    // w = z³(1 + A);  u = (1 + A)^{-1}
    let shifted = TruncSeries::new(w.coeffs()[3..].to_vec(), deg + 1, &zero);
    let u = shifted.inverse_with(&q(1));
    let z = TruncSeries::var(deg + 1, &zero);
    let du = TruncSeries::new(u.derivative().coeffs().to_vec(), deg + 1, &zero);
    // x' z³ = -2u + z u';  (2y + a1 x + a3) z³ = -2u + a1 z u + a3 z³
    let numer = u.scale(&q(-2)) + z.clone() * du;
    let z3 = z.clone() * z.clone() * z.clone();
    let denom = u.scale(&q(-2)) + (z * u).scale(&q(a1)) + z3.scale(&q(a3));
    let inv = denom.inverse_with(&BigRational::new(BigInt::from(-1), BigInt::from(2)));
    (numer * inv).truncate(deg)
}

/// log_Ê through degree `deg`, exact over Q.
pub fn formal_log(e: &CurveParams, deg: usize) -> TruncSeries<BigRational> {
    let omega = invariant_differential(e, deg.saturating_sub(1).max(1));
    omega.integrate().truncate(deg)
}

/// exp_Ê through degree `deg`, the compositional inverse of the logarithm.
pub fn formal_exp(e: &CurveParams, deg: usize) -> TruncSeries<BigRational> {
    formal_log(e, deg).reversion()
}

/// Largest p-adic denominator exponent among the coefficients.
pub fn max_den_exp(s: &TruncSeries<BigRational>, p: u64) -> u32 {
    s.coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| super::curve::bigint_valuation(c.denom(), p))
        .max()
        .unwrap_or(0)
}

/// [m](X) = F(X, [m-1](X)) through degree `deg`.
pub fn multiplication_series(f: &BiSeries<BigInt>, m: u64) -> TruncSeries<BigInt> {
    let deg = f.degree_bound();
    let zero = BigInt::zero();
    let x = TruncSeries::var(deg, &zero);
    let mut acc = x.clone();
    for _ in 1..m {
        acc = f.eval_with(&x, &acc, |c| TruncSeries::constant(c.clone(), deg));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ss3() -> CurveParams {
        CurveParams::from_preset("ss3", 3).unwrap()
    }

    #[test]
    fn axioms() {
        let f = formal_group_law(&ss3(), 8).unwrap();
        let zero = BigInt::zero();
        let x = TruncSeries::var(8, &zero);
        assert_eq!(f.restrict_y0(), x);
        assert_eq!(f.swapped(), f);
        assert_eq!(f.coeff(0, 0), &zero);
        assert_eq!(f.coeff(1, 0), &BigInt::one());
        assert_eq!(f.coeff(0, 1), &BigInt::one());
        assert!(formal_group_law(&ss3(), 1).is_err());
    }

    #[test]
    fn log_normalisation() {
        let l = formal_log(&ss3(), 10);
        assert!(l.coeff(0).is_zero());
        assert!(l.coeff(1).is_one());
    }
}
