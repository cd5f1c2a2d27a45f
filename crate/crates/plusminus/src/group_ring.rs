//! Z_p[F]/(F^d - 1), the Iwasawa-polynomial family ω, and characters of Δ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, ZpMatrix, DEFAULT_MARGIN};
use crate::padic::{primitive_root, teichmuller, Zp};
use crate::poly::Poly;
use crate::ring::RingElem;

/// Element of Z_p[F]/(F^d - 1); `coeffs[i]` multiplies F^i.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElt {
    coeffs: Vec<u64>,
    zp: Zp,
}

impl GroupRingElt {
    pub fn zero(zp: Zp, d: usize) -> Self {
        assert!(d >= 1, "group ring of a trivial cyclic group needs d ≥ 1");
        GroupRingElt { coeffs: vec![0; d], zp }
    }

    pub fn scalar(zp: Zp, d: usize, a: i64) -> Self {
        let mut x = Self::zero(zp, d);
        x.coeffs[0] = zp.from_i64(a).value();
        x
    }

    pub fn one(zp: Zp, d: usize) -> Self {
        Self::scalar(zp, d, 1)
    }

    /// F^k, k taken mod d.
    pub fn f_pow(zp: Zp, d: usize, k: i64) -> Self {
        let mut x = Self::zero(zp, d);
        x.coeffs[k.rem_euclid(d as i64) as usize] = 1 % zp.modulus();
        x
    }

    pub fn from_i64s(zp: Zp, coeffs: &[i64]) -> Self {
        GroupRingElt { coeffs: coeffs.iter().map(|&c| zp.from_i64(c).value()).collect(), zp }
    }

    pub fn from_raw(zp: Zp, coeffs: Vec<u64>) -> Self {
        let m = zp.modulus();
        GroupRingElt { coeffs: coeffs.into_iter().map(|c| c % m).collect(), zp }
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }
    pub fn zp(&self) -> Zp {
        self.zp
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Least valuation of a coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().filter(|&&c| c != 0).map(|&c| self.zp.val_raw(c)).min()
    }

    /// Matrix of multiplication by `self` on the basis 1, F, ..., F^{d-1}.
    pub fn mul_matrix(&self) -> ZpMatrix {
        let d = self.d();
        let mut m = ZpMatrix::zeros(self.zp, d, d);
        for j in 0..d {
            for (i, &c) in self.coeffs.iter().enumerate() {
                m.set((i + j) % d, j, c);
            }
        }
        m
    }

    /// The inverse, when `self` is a unit.
    pub fn inverse(&self) -> Option<Self> {
        is_unit(self).1
    }

    pub fn scale(&self, a: u64) -> Self {
        GroupRingElt { coeffs: self.coeffs.iter().map(|&c| self.zp.mul_raw(c, a)).collect(), zp: self.zp }
    }

    /// Image under F ↦ F^{-1}.
    pub fn involution(&self) -> Self {
        let d = self.d();
        let coeffs = (0..d).map(|i| self.coeffs[(d - i) % d]).collect();
        GroupRingElt { coeffs, zp: self.zp }
    }
}

impl fmt::Debug for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signed: Vec<i128> = self.coeffs.iter().map(|&c| self.zp.signed(c)).collect();
        write!(f, "GR{signed:?}")
    }
}

impl Add for GroupRingElt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let z = self.zp;
        GroupRingElt { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| z.add_raw(a, b)).collect(), zp: z }
    }
}

impl Sub for GroupRingElt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for GroupRingElt {
    type Output = Self;
    fn neg(self) -> Self {
        let z = self.zp;
        GroupRingElt { coeffs: self.coeffs.iter().map(|&a| z.neg_raw(a)).collect(), zp: z }
    }
}

impl Mul for GroupRingElt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let z = self.zp;
        let d = self.d();
        let mut out = vec![0u64; d];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let k = (i + j) % d;
                out[k] = z.add_raw(out[k], z.mul_raw(a, b));
            }
        }
        GroupRingElt { coeffs: out, zp: z }
    }
}

impl RingElem for GroupRingElt {
    fn zero_like(&self) -> Self {
        Self::zero(self.zp, self.d())
    }
    fn one_like(&self) -> Self {
        Self::one(self.zp, self.d())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::scalar(self.zp, self.d(), n)
    }
}

/// Polynomials over Z_p[G_{-1}].
pub type GRPoly = Poly<GroupRingElt>;

/// φ + φ^{-1} = F + F^{d-1}; the element 2 when d = 1.
pub fn phi_plus_phi_inv(zp: Zp, d: usize) -> GroupRingElt {
    GroupRingElt::f_pow(zp, d, 1) + GroupRingElt::f_pow(zp, d, -1)
}

/// 1 - F² + F⁴ - ... - F^{d-2}.
pub fn alternating_element(zp: Zp, d: usize) -> GroupRingElt {
    let mut x = GroupRingElt::zero(zp, d);
    for k in (0..d).step_by(2) {
        let s = if (k / 2) % 2 == 0 { 1 } else { -1 };
        x = x + GroupRingElt::f_pow(zp, d, k as i64).scale(zp.from_i64(s).value());
    }
    x
}

// Dense polynomials over F_p, lowest degree first, trimmed.
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let z = Zp::new(p, 1).expect("prime");
    z.inv_raw(a).expect("nonzero residue")
}

fn fp_sub_scaled(a: &mut Vec<u64>, b: &[u64], c: u64, shift: usize, p: u64) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, &x) in b.iter().enumerate() {
        a[i + shift] = (a[i + shift] + p - (c * x) % p) % p;
    }
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    let lead_inv = fp_inv(*b.last().unwrap(), p);
    let mut q = vec![0; a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (r.last().unwrap() * lead_inv) % p;
        q[shift] = c;
        fp_sub_scaled(&mut r, b, c, shift, p);
        r = fp_trim(r);
    }
    (fp_trim(q), r)
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

/// Returns (g, s) with s·a ≡ g (mod m), g = gcd(a, m) monic.
fn fp_gcd_cofactor(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (m.to_vec(), fp_trim(a.to_vec()));
    let (mut s0, mut s1) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let qs = fp_mul(&q, &s1, p);
        let mut s2 = s0.clone();
        fp_sub_scaled(&mut s2, &qs, 1, 0, p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, fp_trim(s2));
    }
    let c = fp_inv(*r0.last().unwrap(), p);
    let g = r0.iter().map(|x| x * c % p).collect();
    let s = s0.iter().map(|x| x * c % p).collect();
    (g, s)
}

/// Unit test through gcd(x mod p, F^d - 1) over F_p, then Newton lifting of the inverse.
pub fn is_unit(x: &GroupRingElt) -> (bool, Option<GroupRingElt>) {
    let z = x.zp();
    let p = z.p();
    let d = x.d();
    let reduced: Vec<u64> = fp_trim(x.coeffs().iter().map(|c| c % p).collect());
    if reduced.is_empty() {
        return (false, None);
    }
    let mut m = vec![0u64; d + 1];
    m[0] = p - 1;
    m[d] = 1;
    let (g, s) = fp_gcd_cofactor(&reduced, &m, p);
    if g.len() != 1 {
        return (false, None);
    }
    let mut coeffs = vec![0u64; d];
    for (i, c) in s.into_iter().enumerate() {
        coeffs[i % d] = (coeffs[i % d] + c) % p;
    }
    let mut y = GroupRingElt::from_raw(z, coeffs);
    let two = GroupRingElt::scalar(z, d, 2);
    // Each step doubles the number of correct p-adic digits.
    let mut digits = 1;
    while digits < z.prec() {
        y = y.clone() * (two.clone() - x.clone() * y);
        digits *= 2;
    }
    (true, Some(y))
}

/// Ann(x) as a saturated Z_p-lattice inside Z_p[G_{-1}].
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub gens: Vec<GroupRingElt>,
    pub rank: usize,
}

pub fn annihilator(x: &GroupRingElt) -> Annihilator {
    let k = kernel(&x.mul_matrix(), DEFAULT_MARGIN);
    let gens: Vec<GroupRingElt> = k.columns().into_iter().map(|c| GroupRingElt::from_raw(x.zp(), c)).collect();
    Annihilator { rank: gens.len(), gens }
}

/// ω_n, the cyclotomic factors Φ_m(1+X) and the plus/minus parts, over Z.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaFamily {
    pub p: u64,
    pub n: u32,
    pub omega: Poly<BigInt>,
    /// Φ_m(1+X) for m = 1..=n.
    pub phi: Vec<Poly<BigInt>>,
    pub tilde_plus: Poly<BigInt>,
    pub tilde_minus: Poly<BigInt>,
    pub plus: Poly<BigInt>,
    pub minus: Poly<BigInt>,
}

/// Φ_m(Y) = Σ_{i<p} Y^{i p^{m-1}}, m ≥ 1.
pub fn cyclotomic_poly(p: u64, m: u32) -> Poly<BigInt> {
    assert!(m >= 1);
    let step = p.pow(m - 1) as usize;
    let mut c = vec![BigInt::zero(); step * (p as usize - 1) + 1];
    for i in 0..p as usize {
        c[i * step] = BigInt::one();
    }
    Poly::new(c, BigInt::zero())
}

pub fn omega_family(p: u64, n: u32) -> OmegaFamily {
    let zero = BigInt::zero();
    let x = Poly::x(&zero);
    let one = Poly::constant(BigInt::one());
    let omega = (x.clone() + one.clone()).pow(p.pow(n) as u32) - one.clone();
    let phi: Vec<Poly<BigInt>> = (1..=n).map(|m| cyclotomic_poly(p, m).shift_one()).collect();
    let product = |parity: u32| {
        phi.iter()
            .enumerate()
            .filter(|(i, _)| (*i as u32 + 1) % 2 == parity)
            .fold(one.clone(), |acc, (_, f)| acc * f.clone())
    };
    let tilde_plus = product(0);
    let tilde_minus = product(1);
    let plus = x.clone() * tilde_plus.clone();
    let minus = x * tilde_minus.clone();
    assert_eq!(omega, tilde_minus.clone() * plus.clone(), "ω_n factorisation (plus)");
    assert_eq!(omega, tilde_plus.clone() * minus.clone(), "ω_n factorisation (minus)");
    OmegaFamily { p, n, omega, phi, tilde_plus, tilde_minus, plus, minus }
}

/// Embeds an integer polynomial into Z_p[G_{-1}][X] as scalars.
pub fn to_grpoly(f: &Poly<BigInt>, zp: Zp, d: usize) -> GRPoly {
    let m = BigInt::from(zp.modulus());
    let proto = GroupRingElt::zero(zp, d);
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| {
            let r: BigInt = ((c % &m) + &m) % &m;
            let mut v = vec![0u64; d];
            v[0] = r.try_into().expect("residue fits");
            GroupRingElt::from_raw(zp, v)
        })
        .collect();
    Poly::new(coeffs, proto)
}

/// q_n = Σ_{i=0}^n (-1)^i p^{n-i} for n ≥ 0, and q_{-1} = 1.
pub fn q(p: u64, n: i64) -> i64 {
    if n < 0 {
        return 1;
    }
    (0..=n).map(|i| (if i % 2 == 0 { 1 } else { -1 }) * (p as i64).pow((n - i) as u32)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QValues {
    pub q: i64,
    pub plus: i64,
    pub minus: i64,
}

/// (q_n, q_n^+, q_n^-), with q_n^- = p^n - q_n^+ (so q_0^- = 0).
pub fn q_values(p: u64, n: i64) -> Result<QValues> {
    if n < -1 {
        return Err(Error::InvalidParameter(format!("q_n needs n ≥ -1, got {n}")));
    }
    let qn = q(p, n);
    if n < 0 {
        return Ok(QValues { q: qn, plus: qn, minus: 0 });
    }
    let plus = if n % 2 == 0 { qn } else { q(p, n - 1) };
    let minus = (p as i64).pow(n as u32) - plus;
    Ok(QValues { q: qn, plus, minus })
}

/// δ = 2 when d ≡ 0 (mod 4) and χ is trivial, 0 otherwise.
pub fn delta_of(d: usize, chi: usize) -> usize {
    if d % 4 == 0 && chi == 0 {
        2
    } else {
        0
    }
}

/// ε_χ in Z_p[Δ] for χ = ω^j; Δ is indexed by powers of a fixed primitive root g,
/// so `elt.coeffs()[k]` multiplies σ_{g^k}.
#[derive(Clone, Debug, PartialEq)]
pub struct CharIdempotent {
    pub j: usize,
    pub generator: u64,
    pub elt: GroupRingElt,
}

pub fn idempotents(zp: Zp) -> Result<Vec<CharIdempotent>> {
    let p = zp.p();
    let g = primitive_root(p);
    let w = teichmuller(g, zp)?;
    let order = (p - 1) as usize;
    let inv = zp.from_i64(order as i64).inverse()?;
    let mut out = Vec::with_capacity(order);
    for j in 0..order {
        // coefficient of σ^{-1} = g^{-k} is χ(g^k)/(p-1)
        let mut coeffs = vec![0u64; order];
        for k in 0..order {
            let chi = w.pow((j * k) as u64);
            coeffs[(order - k) % order] = (chi * inv).value();
        }
        out.push(CharIdempotent { j, generator: g, elt: GroupRingElt::from_raw(zp, coeffs) });
    }
    Ok(out)
}

impl CharIdempotent {
    /// Pairs (a, c): the element Σ c·σ_a with σ_a ∈ Δ = (Z/p)^×.
    pub fn terms(&self) -> Vec<(u64, u64)> {
        let p = self.elt.zp().p();
        let mut a = 1u64;
        let mut out = Vec::new();
        for &c in self.elt.coeffs() {
            if c != 0 {
                out.push((a, c));
            }
            a = a * self.generator % p;
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }
}
