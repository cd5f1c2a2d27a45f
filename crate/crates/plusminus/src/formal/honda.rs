use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::curve::bigint_valuation;
use crate::error::{Error, Result};
use crate::padic::UnramifiedElt;
use crate::ring::RingElem;
use crate::series::TruncSeries;
use crate::tower::{twist_unit, TowerDesc, TowerElt};

/// Series over k = k_{-1} with explicit p-power denominators.
pub type KSeries = TruncSeries<TowerElt>;

fn residue_of(tower: &Arc<TowerDesc>, x: &BigInt) -> u64 {
    let m = BigInt::from(tower.zp().modulus());
    let r = ((x % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

/// p^v · u with u a unit integer, as an element of k at level `level`.
fn scaled_unit(tower: &Arc<TowerDesc>, level: i64, unit_num: &BigInt, unit_den: &BigInt, v: i64) -> TowerElt {
    let z = tower.zp();
    let num = residue_of(tower, unit_num);
    let den = residue_of(tower, unit_den);
    let u = z.mul_raw(num, z.inv_raw(den).expect("unit denominator"));
    let field = tower.field();
    let n = tower.prec() as i64;
    if v >= 0 {
        let val = UnramifiedElt::scalar(field, z.elem(u)).mul_p_pow(v.min(n) as u32);
        TowerElt::from_base(tower, level, &val)
    } else {
        let coords = {
            let mut t = TowerElt::zero(tower, level).coords().to_vec();
            t[0] = UnramifiedElt::scalar(field, z.elem(u));
            t
        };
        TowerElt::from_parts(tower, level, coords, (-v) as u32, n + v)
    }
}

/// A rational number as an element of k_n (at the given level).
pub fn rational_to_tower(tower: &Arc<TowerDesc>, level: i64, q: &BigRational) -> TowerElt {
    if q.is_zero() {
        return TowerElt::zero(tower, level);
    }
    let p = tower.p();
    let vn = bigint_valuation(q.numer(), p);
    let vd = bigint_valuation(q.denom(), p);
    let pb = BigInt::from(p);
    let un = q.numer() / num_traits::pow(pb.clone(), vn as usize);
    let ud = q.denom() / num_traits::pow(pb, vd as usize);
    scaled_unit(tower, level, &un, &ud, vn as i64 - vd as i64)
}

pub fn integer_to_tower(tower: &Arc<TowerDesc>, level: i64, x: &BigInt) -> TowerElt {
    let m = BigInt::from(tower.zp().modulus());
    let r = ((x % &m) + &m) % &m;
    TowerElt::from_i64(tower, level, r.to_i64().expect("residue fits"))
}

pub fn rational_series_to_k(tower: &Arc<TowerDesc>, s: &TruncSeries<BigRational>) -> KSeries {
    s.map(|c| rational_to_tower(tower, -1, c))
}

fn binomial(n: &BigUint, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// log_{𝒢_n}(X) = Σ_m (-1)^m ((X + ζ')^{p^{2m}} - ζ'^{p^{2m}})/p^m, ζ' = ζ^{φ^{-(n+1)}}, through degree `deg`.
///
/// The coefficient of X^j in the m-th term has valuation m - v_p(j); terms with
/// valuation ≥ N vanish at working precision and are dropped.
pub fn honda_log_unchecked(tower: &Arc<TowerDesc>, n: i64, deg: usize) -> KSeries {
    let p = tower.p();
    let prec = tower.prec() as i64;
    let field = tower.field();
    let zeta = twist_unit(tower, n);
    let mut coeffs = vec![TowerElt::zero(tower, -1)];
    for j in 1..=deg {
        let vj = bigint_valuation(&BigInt::from(j), p) as i64;
        let mut acc = TowerElt::zero(tower, -1);
        let mut m = 0i64;
        loop {
            let q = BigUint::from(p).pow(2 * m as u32);
            if q >= BigUint::from(j) {
                let c = BigInt::from(binomial(&q, j));
                let vc = bigint_valuation(&c, p) as i64;
                let unit = &c / num_traits::pow(BigInt::from(p), vc as usize);
                let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let term = scaled_unit(tower, -1, &(sign * unit), &BigInt::one(), vc - m);
                let exp = q.to_i64().map(|e| e - j as i64).unwrap_or_else(|| {
                    // ζ' has order dividing p^d - 1; reduce the exponent there.
                    let ord = BigUint::from(field.unit_order());
                    let r = (&q % &ord).to_i64().unwrap();
                    r - j as i64
                });
                let z = zeta.pow(exp.rem_euclid(field.unit_order() as i64) as u64);
                acc = acc + term.scale_base(&z);
            }
            m += 1;
            // Tail bound: every later term has valuation ≥ m - v_p(j) ≥ N.
            if m - vj >= prec {
                break;
            }
        }
        coeffs.push(acc);
    }
    TruncSeries::new(coeffs, deg, &TowerElt::zero(tower, -1))
}

/// Honda-type congruence residuals p·f_i + [p² | i] f_{i/p²}^{φ²}, and integrality of j·f_j.
#[derive(Clone, Debug)]
pub struct HondaCheck {
    pub congruence_min_valuation: i64,
    pub derivative_min_valuation: i64,
    pub min_precision: i64,
}

impl HondaCheck {
    pub fn pass(&self) -> bool {
        self.congruence_min_valuation >= 1 && self.derivative_min_valuation >= 0 && self.min_precision >= 1
    }
}

pub fn honda_check(f: &KSeries, p: u64) -> HondaCheck {
    let deg = f.degree_bound();
    let p2 = (p * p) as usize;
    let mut cmin = i64::MAX;
    let mut dmin = i64::MAX;
    let mut pmin = i64::MAX;
    for i in 1..=deg {
        let fi = f.coeff(i);
        let mut h = fi.mul_p_pow(1);
        if i % p2 == 0 {
            let prev = f.coeff(i / p2);
            let tw = TowerElt::from_parts(
                prev.tower(),
                -1,
                vec![prev.coords()[0].frobenius(2)],
                prev.den_exp(),
                prev.abs_prec(),
            );
            h = h + tw;
        }
        cmin = cmin.min(h.residual_valuation());
        pmin = pmin.min(h.abs_prec());
        let dj = fi.clone() * fi.from_i64_like(i as i64);
        dmin = dmin.min(dj.residual_valuation());
    }
    HondaCheck { congruence_min_valuation: cmin, derivative_min_valuation: dmin, min_precision: pmin }
}

/// log_{𝒢_n} through degree `deg`, failing loudly if either Honda check fails.
pub fn honda_log(tower: &Arc<TowerDesc>, n: i64, deg: usize) -> Result<KSeries> {
    if deg < 1 {
        return Err(Error::InvalidParameter("honda_log needs degree ≥ 1".into()));
    }
    let f = honda_log_unchecked(tower, n, deg);
    let c = honda_check(&f, tower.p());
    if !c.pass() {
        return Err(Error::HondaCheckFailed(format!("{c:?}")));
    }
    Ok(f)
}

/// ε_n = Σ_{i≥1} (-1)^{i-1} ζ^{φ^{-(n+1+2i)}} p^i, truncated at i = N.
pub fn epsilon_n(tower: &Arc<TowerDesc>, n: i64) -> UnramifiedElt {
    let field = tower.field();
    let zeta = UnramifiedElt::zeta(field);
    let mut acc = UnramifiedElt::zero(field);
    for i in 1..=tower.prec() as i64 {
        let term = zeta.frobenius(-(n + 1 + 2 * i)).mul_p_pow(i as u32);
        acc = if i % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        let t = TowerDesc::new(3, 2, 6, 2).unwrap();
        for n in -1..=2 {
            assert_eq!(epsilon_n(&t, n).valuation(), Some(1));
            assert_eq!(epsilon_n(&t, n).frobenius(1), epsilon_n(&t, n - 1));
        }
    }

    #[test]
    fn linear_term_is_unit() {
        let t = TowerDesc::new(3, 2, 4, 0).unwrap();
        let f = honda_log(&t, 0, 10).unwrap();
        assert_eq!(f.coeff(1).valuation(), Some(0));
    }
}
