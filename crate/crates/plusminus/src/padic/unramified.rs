use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::zp::{PAdicInt, Zp};
use crate::error::{Error, Result};
use crate::linalg::ZpMatrix;
use crate::ring::RingElem;

/// Dense polynomial arithmetic modulo a monic polynomial over Z/p^N.
/// Polynomials are coefficient vectors, lowest degree first.
fn mul_mod(z: Zp, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * d.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = z.add_raw(prod[i + j], z.mul_raw(x, y));
            }
        }
    }
    reduce_mod(z, &mut prod, modulus);
    prod.truncate(d);
    prod.resize(d, 0);
    prod
}

fn reduce_mod(z: Zp, poly: &mut [u64], modulus: &[u64]) {
    let d = modulus.len() - 1;
    for k in (d..poly.len()).rev() {
        let c = poly[k];
        if c == 0 {
            continue;
        }
        poly[k] = 0;
        for i in 0..d {
            let t = z.mul_raw(c, modulus[i]);
            poly[k - d + i] = z.sub_raw(poly[k - d + i], t);
        }
    }
}

fn pow_mod(z: Zp, a: &[u64], mut e: u64, modulus: &[u64]) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut acc = vec![0u64; d];
    acc[0] = 1 % z.modulus();
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(z, &acc, &base, modulus);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(z, &base, &base, modulus);
        }
    }
    acc
}

fn x_poly(z: Zp, d: usize) -> Vec<u64> {
    let mut x = vec![0u64; d];
    if d == 1 {
        // In degree one the class of x is the root itself.
        return x;
    }
    x[1] = 1 % z.modulus();
    x
}

/// Class of x in (Z/p^N)[x]/(modulus).
fn x_class(z: Zp, modulus: &[u64]) -> Vec<u64> {
    let d = modulus.len() - 1;
    if d == 1 {
        return vec![z.neg_raw(modulus[0])];
    }
    x_poly(z, d)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_gcd_fp(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let fp = Zp::new(p, 1).expect("odd prime");
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lead_inv = fp.inv_raw(*b.last().unwrap()).unwrap();
        while a.len() >= b.len() {
            let c = fp.mul_raw(*a.last().unwrap(), lead_inv);
            let shift = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = fp.sub_raw(a[shift + i], fp.mul_raw(c, bi));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Irreducibility over F_p: f divides x^{p^d} - x and is coprime to x^{p^e} - x for e | d, e < d.
pub fn is_irreducible_fp(p: u64, f: &[u64]) -> bool {
    let d = f.len() - 1;
    let fp = Zp::new(p, 1).expect("odd prime");
    if d == 1 {
        return true;
    }
    let x = x_poly(fp, d);
    let frob_pow = |e: usize| {
        let mut y = x.clone();
        for _ in 0..e {
            y = pow_mod(fp, &y, p, f);
        }
        y
    };
    let mut top = frob_pow(d);
    top[1] = fp.sub_raw(top[1], 1);
    if top.iter().any(|&c| c != 0) {
        return false;
    }
    (1..d).filter(|e| d % e == 0).all(|e| {
        let mut g = frob_pow(e);
        g[1] = fp.sub_raw(g[1], 1);
        let gcd = poly_gcd_fp(p, f, &g);
        gcd.len() == 1
    })
}

fn is_primitive_normal_fp(p: u64, f: &[u64]) -> bool {
    let d = f.len() - 1;
    let fp = Zp::new(p, 1).expect("odd prime");
    if f[0] == 0 {
        return false;
    }
    let order = p.pow(d as u32) - 1;
    let x = x_class(fp, f);
    let one: Vec<u64> = {
        let mut v = vec![0; d];
        v[0] = 1;
        v
    };
    if pow_mod(fp, &x, order, f) != one {
        return false;
    }
    if prime_factors(order).iter().any(|&r| pow_mod(fp, &x, order / r, f) == one) {
        return false;
    }
    // Normal: the conjugates x^{p^i} are linearly independent over F_p.
    let mut cols = Vec::with_capacity(d);
    let mut y = x.clone();
    for _ in 0..d {
        cols.push(y.clone());
        y = pow_mod(fp, &y, p, f);
    }
    ZpMatrix::from_columns(fp, d, &cols).inverse().is_ok()
}

/// Lexicographically first monic polynomial of degree d over F_p whose root
/// generates F_{p^d}^x and a normal basis.
pub fn primitive_normal_poly(p: u64, d: usize) -> Result<Vec<u64>> {
    let count = p.pow(d as u32);
    for code in 0..count {
        let mut f = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if is_primitive_normal_fp(p, &f) {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!("no primitive normal polynomial of degree {d} over F_{p}")))
}

/// The unramified extension O_k = Z_p[ζ] of degree d, ζ a Teichmüller generator.
#[derive(Debug)]
pub struct FieldDesc {
    zp: Zp,
    d: usize,
    residue_poly: Vec<u64>,
    modulus: Vec<u64>,
    frob_pows: Vec<ZpMatrix>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.zp == other.zp && self.modulus == other.modulus
    }
}

pub fn build_unramified(p: u64, d: usize, prec: u32) -> Result<Arc<FieldDesc>> {
    let zp = Zp::new(p, prec)?;
    if d == 0 {
        return Err(Error::InvalidParameter("degree d must be at least 1".into()));
    }
    let residue_poly = primitive_normal_poly(p, d)?;
    if !is_irreducible_fp(p, &residue_poly) {
        return Err(Error::Internal("residue polynomial is reducible".into()));
    }
    let q = p.pow(d as u32);
    // Teichmüller lift of the root: t = lim x^{q^k} in (Z/p^N)[x]/(f).
    let mut t = x_class(zp, &residue_poly);
    for _ in 0..prec {
        t = pow_mod(zp, &t, q, &residue_poly);
    }
    // Minimal polynomial of t: solve [t^0 .. t^{d-1}] c = t^d.
    let mut powers = Vec::with_capacity(d + 1);
    let mut acc = {
        let mut v = vec![0u64; d];
        v[0] = 1 % zp.modulus();
        v
    };
    for _ in 0..=d {
        powers.push(acc.clone());
        acc = mul_mod(zp, &acc, &t, &residue_poly);
    }
    let pmat = ZpMatrix::from_columns(zp, d, &powers[..d]);
    let c = pmat.inverse()?.mul_vec(&powers[d]);
    let mut modulus: Vec<u64> = c.iter().map(|&ci| zp.neg_raw(ci)).collect();
    modulus.push(1 % zp.modulus());

    let x = x_class(zp, &modulus);
    if pow_mod(zp, &x, q, &modulus) != x {
        return Err(Error::Internal("lifted generator is not Teichmüller".into()));
    }
    let mut frob_cols = Vec::with_capacity(d);
    let xp = pow_mod(zp, &x, p, &modulus);
    let mut col = {
        let mut v = vec![0u64; d];
        v[0] = 1 % zp.modulus();
        v
    };
    for _ in 0..d {
        frob_cols.push(col.clone());
        col = mul_mod(zp, &col, &xp, &modulus);
    }
    let frob = ZpMatrix::from_columns(zp, d, &frob_cols);
    let mut frob_pows = vec![ZpMatrix::identity(zp, d)];
    for k in 1..d {
        let next = frob.mul(&frob_pows[k - 1]);
        frob_pows.push(next);
    }
    Ok(Arc::new(FieldDesc { zp, d, residue_poly, modulus, frob_pows }))
}

impl FieldDesc {
    pub fn zp(&self) -> Zp {
        self.zp
    }
    pub fn p(&self) -> u64 {
        self.zp.p()
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn prec(&self) -> u32 {
        self.zp.prec()
    }
    /// Monic modulus over Z/p^N, lowest coefficient first.
    pub fn modulus(&self) -> Vec<PAdicInt> {
        self.modulus.iter().map(|&c| self.zp.elem(c)).collect()
    }
    pub fn residue_poly(&self) -> &[u64] {
        &self.residue_poly
    }
    pub fn frobenius_matrix(&self) -> &ZpMatrix {
        if self.d == 1 {
            &self.frob_pows[0]
        } else {
            &self.frob_pows[1]
        }
    }
    /// Order of the Teichmüller generator.
    pub fn unit_order(&self) -> u64 {
        self.p().pow(self.d as u32) - 1
    }
}

pub fn frobenius_matrix_power(field: &FieldDesc, power: i64) -> &ZpMatrix {
    let k = power.rem_euclid(field.d as i64) as usize;
    &field.frob_pows[k]
}

#[derive(Clone)]
pub struct UnramifiedElt {
    coeffs: Vec<u64>,
    field: Arc<FieldDesc>,
}

impl UnramifiedElt {
    pub fn from_raw(field: &Arc<FieldDesc>, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), field.d, "coordinate count must equal d");
        UnramifiedElt { coeffs, field: Arc::clone(field) }
    }

    pub fn zero(field: &Arc<FieldDesc>) -> Self {
        Self::from_raw(field, vec![0; field.d])
    }

    pub fn scalar(field: &Arc<FieldDesc>, a: PAdicInt) -> Self {
        let mut c = vec![0; field.d];
        c[0] = a.value();
        Self::from_raw(field, c)
    }

    pub fn from_i64(field: &Arc<FieldDesc>, a: i64) -> Self {
        Self::scalar(field, field.zp.from_i64(a))
    }

    pub fn one(field: &Arc<FieldDesc>) -> Self {
        Self::from_i64(field, 1)
    }

    /// ζ^e for any integer e (exponents taken mod p^d - 1).
    pub fn zeta_pow(field: &Arc<FieldDesc>, e: i64) -> Self {
        let order = field.unit_order() as i64;
        let e = e.rem_euclid(order) as u64;
        let x = x_class(field.zp, &field.modulus);
        Self::from_raw(field, pow_mod(field.zp, &x, e, &field.modulus))
    }

    pub fn zeta(field: &Arc<FieldDesc>) -> Self {
        Self::zeta_pow(field, 1)
    }

    pub fn field(&self) -> &Arc<FieldDesc> {
        &self.field
    }

    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<PAdicInt> {
        self.coeffs.iter().map(|&c| self.field.zp.elem(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Least coordinate valuation; `None` when zero at precision N.
    pub fn valuation(&self) -> Option<u32> {
        let z = self.field.zp;
        self.coeffs.iter().filter(|&&c| c != 0).map(|&c| z.val_raw(c)).min()
    }

    pub fn frobenius(&self, power: i64) -> Self {
        let m = frobenius_matrix_power(&self.field, power);
        Self::from_raw(&self.field, m.mul_vec(&self.coeffs))
    }

    pub fn scale(&self, a: u64) -> Self {
        let z = self.field.zp;
        Self::from_raw(&self.field, self.coeffs.iter().map(|&c| z.mul_raw(c, a)).collect())
    }

    /// Multiplication by p^e (zero once e >= N).
    pub fn mul_p_pow(&self, e: u32) -> Self {
        self.scale(self.field.zp.p_pow(e))
    }

    /// Exact division by p^e; the caller guarantees divisibility.
    pub fn div_p_pow(&self, e: u32) -> Self {
        let z = self.field.zp;
        Self::from_raw(&self.field, self.coeffs.iter().map(|&c| z.div_p_pow_raw(c, e)).collect())
    }

    pub fn pow(&self, e: u64) -> Self {
        crate::ring::pow(self, e)
    }

    /// Multiplication-by-self matrix in the power basis.
    pub fn mul_matrix(&self) -> ZpMatrix {
        let d = self.field.d;
        let z = self.field.zp;
        let x = x_class(z, &self.field.modulus);
        let mut cols = Vec::with_capacity(d);
        let mut basis = Self::one(&self.field);
        for _ in 0..d {
            cols.push((self.clone() * basis.clone()).coeffs);
            basis = Self::from_raw(&self.field, mul_mod(z, &basis.coeffs, &x, &self.field.modulus));
        }
        ZpMatrix::from_columns(z, d, &cols)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.mul_matrix().inverse()?;
        let mut e0 = vec![0; self.field.d];
        e0[0] = 1 % self.field.zp.modulus();
        Ok(Self::from_raw(&self.field, inv.mul_vec(&e0)))
    }
}

impl fmt::Debug for UnramifiedElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.field.zp;
        let c: Vec<String> = self.coeffs.iter().map(|&a| z.signed(a).to_string()).collect();
        write!(f, "[{}]", c.join(", "))
    }
}

impl PartialEq for UnramifiedElt {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Add for UnramifiedElt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let z = self.field.zp;
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| z.add_raw(a, b)).collect();
        UnramifiedElt { coeffs: c, field: self.field }
    }
}

impl Sub for UnramifiedElt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let z = self.field.zp;
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| z.sub_raw(a, b)).collect();
        UnramifiedElt { coeffs: c, field: self.field }
    }
}

impl Mul for UnramifiedElt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let z = self.field.zp;
        if self.field.d == 1 {
            return UnramifiedElt { coeffs: vec![z.mul_raw(self.coeffs[0], rhs.coeffs[0])], field: self.field };
        }
        let c = mul_mod(z, &self.coeffs, &rhs.coeffs, &self.field.modulus);
        UnramifiedElt { coeffs: c, field: self.field }
    }
}

impl Neg for UnramifiedElt {
    type Output = Self;
    fn neg(self) -> Self {
        let z = self.field.zp;
        let c = self.coeffs.iter().map(|&a| z.neg_raw(a)).collect();
        UnramifiedElt { coeffs: c, field: self.field }
    }
}

impl RingElem for UnramifiedElt {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::from_i64(&self.field, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_is_trivial() {
        let f = build_unramified(3, 1, 4).unwrap();
        assert_eq!(f.frobenius_matrix(), &ZpMatrix::identity(f.zp(), 1));
        let z = UnramifiedElt::zeta(&f);
        assert_eq!(z.pow(2), UnramifiedElt::one(&f));
    }

    #[test]
    fn generator_orders() {
        let f = build_unramified(3, 2, 4).unwrap();
        let z = UnramifiedElt::zeta(&f);
        assert_eq!(z.pow(8), UnramifiedElt::one(&f));
        assert_ne!(z.pow(4), UnramifiedElt::one(&f));
    }

    #[test]
    fn frobenius_order_p5_d4() {
        let f = build_unramified(5, 4, 3).unwrap();
        let z = UnramifiedElt::zeta(&f);
        assert_eq!(z.frobenius(4), z);
        assert_ne!(z.frobenius(2), z);
        assert_eq!(z.frobenius(1), z.pow(5));
        assert_eq!(z.frobenius(-1), z.pow(125));
    }

    #[test]
    fn valuations() {
        let f = build_unramified(3, 2, 4).unwrap();
        let z = UnramifiedElt::zeta(&f);
        assert_eq!(z.scale(3).valuation(), Some(1));
        assert_eq!((z.clone() + UnramifiedElt::one(&f)).valuation(), Some(0));
        assert_eq!(UnramifiedElt::zero(&f).valuation(), None);
    }

    #[test]
    fn inverse_of_unit() {
        let f = build_unramified(5, 3, 4).unwrap();
        let x = UnramifiedElt::zeta(&f) + UnramifiedElt::from_i64(&f, 5);
        assert_eq!(x.clone() * x.inverse().unwrap(), UnramifiedElt::one(&f));
    }
}
