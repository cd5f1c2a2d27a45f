//! Arithmetic in k_n = k(μ_{p^{n+1}}) over the power basis of η = ζ_{p^{n+1}}.
//!
//! η is the class of Z in O_k[Z]/Φ_{p^{n+1}}(Z); lower roots of unity are
//! η^{p^{n+1-j}}, so the compatible system is exact by construction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Lattice, ZpMatrix};
use crate::padic::{build_unramified, teichmuller, FieldDesc, UnramifiedElt, Zp};
use crate::ring::RingElem;

#[derive(Debug)]
pub struct TowerDesc {
    field: Arc<FieldDesc>,
    n_max: i64,
}

impl TowerDesc {
    pub fn new(p: u64, d: usize, prec: u32, n_max: i64) -> Result<Arc<TowerDesc>> {
        if n_max < -1 {
            return Err(Error::InvalidParameter(format!("tower height {n_max} below -1")));
        }
        let field = build_unramified(p, d, prec)?;
        Ok(Arc::new(TowerDesc { field, n_max }))
    }

    pub fn field(&self) -> &Arc<FieldDesc> {
        &self.field
    }
    pub fn p(&self) -> u64 {
        self.field.p()
    }
    pub fn d(&self) -> usize {
        self.field.d()
    }
    pub fn prec(&self) -> u32 {
        self.field.prec()
    }
    pub fn zp(&self) -> Zp {
        self.field.zp()
    }
    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    /// [k_n : k] = (p-1)p^n, and 1 for n = -1.
    pub fn level_dim(&self, n: i64) -> usize {
        if n < 0 {
            1
        } else {
            (self.p() as usize - 1) * (self.p() as usize).pow(n as u32)
        }
    }

    /// Dimension of k_n over Q_p.
    pub fn ambient_dim(&self, n: i64) -> usize {
        self.level_dim(n) * self.d()
    }

    /// p^{n+1}, the modulus of the cyclotomic Galois group at level n.
    pub fn cyclotomic_modulus(&self, n: i64) -> u64 {
        self.p().pow((n + 1).max(0) as u32)
    }

    pub fn check_level(&self, n: i64) -> Result<()> {
        if n > self.n_max {
            return Err(Error::LevelOverflow { level: n, max: self.n_max });
        }
        Ok(())
    }

    /// Units of Z/p^{n+1}, i.e. Gal(k_n/k); the trivial group for n = -1.
    pub fn cyclotomic_units(&self, n: i64) -> Vec<u64> {
        if n < 0 {
            return vec![1];
        }
        let m = self.cyclotomic_modulus(n);
        (1..m).filter(|u| u % self.p() != 0).collect()
    }

    /// Teichmüller lift of a mod p^{n+1}, the image of a ∈ Δ in Gal(k_n/k).
    pub fn delta_lift(&self, a: u64, n: i64) -> u64 {
        if n < 0 {
            return 1;
        }
        let z = Zp::new(self.p(), (n + 1) as u32).expect("small level");
        teichmuller(a, z).expect("unit").value()
    }
}

/// An element p^{-den_exp} x of k_n with x ∈ O_k[η], known modulo p^{abs_prec}.
#[derive(Clone)]
pub struct TowerElt {
    level: i64,
    den_exp: u32,
    abs_prec: i64,
    coords: Vec<UnramifiedElt>,
    tower: Arc<TowerDesc>,
}

impl TowerElt {
    pub fn zero(tower: &Arc<TowerDesc>, level: i64) -> Self {
        let coords = vec![UnramifiedElt::zero(tower.field()); tower.level_dim(level)];
        TowerElt { level, den_exp: 0, abs_prec: tower.prec() as i64, coords, tower: Arc::clone(tower) }
    }

    pub fn from_base(tower: &Arc<TowerDesc>, level: i64, x: &UnramifiedElt) -> Self {
        let mut t = Self::zero(tower, level);
        t.coords[0] = x.clone();
        t
    }

    pub fn from_i64(tower: &Arc<TowerDesc>, level: i64, a: i64) -> Self {
        Self::from_base(tower, level, &UnramifiedElt::from_i64(tower.field(), a))
    }

    pub fn one(tower: &Arc<TowerDesc>, level: i64) -> Self {
        Self::from_i64(tower, level, 1)
    }

    /// η = ζ_{p^{n+1}} at level n ≥ 0.
    pub fn eta(tower: &Arc<TowerDesc>, level: i64) -> Self {
        assert!(level >= 0, "η needs level ≥ 0");
        let mut t = Self::zero(tower, level);
        if t.coords.len() > 1 {
            t.coords[1] = UnramifiedElt::one(tower.field());
            t
        } else {
            // p = 2 would be needed for a one-dimensional level 0; excluded.
            unreachable!("odd p gives level-0 dimension ≥ 2")
        }
    }

    /// Element with explicit denominator and precision; canonicalised.
    pub fn from_parts(tower: &Arc<TowerDesc>, level: i64, coords: Vec<UnramifiedElt>, den_exp: u32, abs_prec: i64) -> Self {
        assert_eq!(coords.len(), tower.level_dim(level));
        let mut t = TowerElt { level, den_exp, abs_prec, coords, tower: Arc::clone(tower) };
        t.canonicalize();
        t
    }

    pub fn level(&self) -> i64 {
        self.level
    }
    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }
    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }
    pub fn coords(&self) -> &[UnramifiedElt] {
        &self.coords
    }
    pub fn tower(&self) -> &Arc<TowerDesc> {
        &self.tower
    }

    pub fn with_abs_prec(mut self, prec: i64) -> Self {
        self.abs_prec = self.abs_prec.min(prec);
        self
    }

    fn num_valuation(&self) -> Option<u32> {
        self.coords.iter().filter_map(UnramifiedElt::valuation).min()
    }

    fn canonicalize(&mut self) {
        let n = self.tower.prec() as i64;
        self.abs_prec = self.abs_prec.min(n - self.den_exp as i64);
        while self.den_exp > 0 {
            match self.num_valuation() {
                Some(v) if v >= 1 => {
                    let k = v.min(self.den_exp);
                    self.coords = self.coords.iter().map(|c| c.div_p_pow(k)).collect();
                    self.den_exp -= k;
                }
                Some(_) => break,
                None => {
                    self.den_exp = 0;
                    break;
                }
            }
        }
    }

    /// Coordinate valuation of the value; `None` when zero at its precision.
    pub fn valuation(&self) -> Option<i64> {
        let v = self.num_valuation()? as i64 - self.den_exp as i64;
        if v >= self.abs_prec {
            None
        } else {
            Some(v)
        }
    }

    /// Valuation, or the precision when the element is zero at precision.
    pub fn residual_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.abs_prec)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Embedding into a higher level: η_m^i ↦ η_n^{i p^{n-m}}.
    pub fn lift_to(&self, level: i64) -> Self {
        assert!(level >= self.level, "cannot lift to a lower level");
        if level == self.level {
            return self.clone();
        }
        self.tower.check_level(level).expect("level within tower");
        let step = if self.level < 0 { 0 } else { (self.tower.p() as usize).pow((level - self.level) as u32) };
        let mut out = Self::zero(&self.tower, level);
        for (i, c) in self.coords.iter().enumerate() {
            out.coords[i * step] = c.clone();
        }
        out.den_exp = self.den_exp;
        out.abs_prec = self.abs_prec;
        out
    }

    /// Inverse of the embedding; errors when a coordinate outside k_m is nonzero at precision.
    pub fn descend_to(&self, level: i64) -> Result<Self> {
        assert!(level <= self.level);
        if level == self.level {
            return Ok(self.clone());
        }
        let step = if level < 0 { self.coords.len() } else { (self.tower.p() as usize).pow((self.level - level) as u32) };
        let mut coords = Vec::with_capacity(self.tower.level_dim(level));
        let cut = self.abs_prec + self.den_exp as i64;
        for (i, c) in self.coords.iter().enumerate() {
            if i % step == 0 {
                coords.push(c.clone());
            } else if c.valuation().is_some_and(|v| (v as i64) < cut) {
                return Err(Error::Internal(format!("element does not lie in k_{level}")));
            }
        }
        let mut t = TowerElt { level, den_exp: self.den_exp, abs_prec: self.abs_prec, coords, tower: Arc::clone(&self.tower) };
        t.canonicalize();
        Ok(t)
    }

    fn aligned(a: &TowerElt, b: &TowerElt) -> (TowerElt, TowerElt) {
        let l = a.level.max(b.level);
        (a.lift_to(l), b.lift_to(l))
    }

    /// Multiply the numerator by p^k without changing the value's denominator bookkeeping.
    fn raise_den(&self, den: u32) -> Vec<UnramifiedElt> {
        let k = den - self.den_exp;
        self.coords.iter().map(|c| c.mul_p_pow(k)).collect()
    }

    pub fn scale_base(&self, c: &UnramifiedElt) -> Self {
        let coords = self.coords.iter().map(|x| x.clone() * c.clone()).collect();
        let mut t = TowerElt { coords, ..self.clone() };
        t.canonicalize();
        t
    }

    /// Division by p^k.
    pub fn div_p_pow(&self, k: u32) -> Self {
        let mut t = self.clone();
        t.den_exp += k;
        t.abs_prec -= k as i64;
        t.canonicalize();
        t
    }

    /// Multiplication by p^k.
    pub fn mul_p_pow(&self, k: u32) -> Self {
        let mut t = self.clone();
        let drop = k.min(t.den_exp);
        t.den_exp -= drop;
        let rest = k - drop;
        t.coords = t.coords.iter().map(|c| c.mul_p_pow(rest)).collect();
        t.abs_prec += k as i64;
        t.abs_prec = t.abs_prec.min(self.tower.prec() as i64 - t.den_exp as i64);
        t.canonicalize();
        t
    }

    /// Galois action: η ↦ η^u and φ^f on O_k coefficients.
    pub fn galois_act(&self, u: u64, f: i64) -> Result<Self> {
        let p = self.tower.p();
        if u % p == 0 {
            return Err(Error::NotUnit(format!("{u} mod {p}")));
        }
        let conj: Vec<UnramifiedElt> = if f.rem_euclid(self.tower.d() as i64) == 0 {
            self.coords.clone()
        } else {
            self.coords.iter().map(|c| c.frobenius(f)).collect()
        };
        if self.level < 0 {
            return Ok(TowerElt { coords: conj, ..self.clone() });
        }
        let m = self.tower.cyclotomic_modulus(self.level);
        let u = u % m;
        let dim = self.coords.len();
        let block = dim / (p as usize - 1);
        let mut out = vec![UnramifiedElt::zero(self.tower.field()); dim];
        for (i, c) in conj.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as u64 * u) % m) as usize;
            if e < dim {
                out[e] = out[e].clone() + c;
            } else {
                // η^e = -Σ_{i'<p-1} η^{e-(p-1)p^n+i'p^n}
                let base = e - dim;
                for k in 0..(p as usize - 1) {
                    let t = base + k * block;
                    out[t] = out[t].clone() - c.clone();
                }
            }
        }
        Ok(TowerElt { coords: out, ..self.clone() })
    }

    /// Sum of the conjugates over Gal(k_n/k_m), returned at level m.
    pub fn trace(&self, target: i64) -> Result<Self> {
        if target > self.level || target < -1 {
            return Err(Error::InvalidParameter(format!("trace from level {} to {target}", self.level)));
        }
        if target == self.level {
            return Ok(self.clone());
        }
        let sub = self.tower.cyclotomic_modulus(target);
        let mut acc = TowerElt::zero(&self.tower, self.level);
        acc.abs_prec = self.abs_prec;
        for u in self.tower.cyclotomic_units(self.level) {
            if target >= 0 && u % sub != 1 {
                continue;
            }
            acc = acc + self.galois_act(u, 0)?;
        }
        acc.descend_to(target)
    }

    /// Coordinates scaled to a declared denominator, flattened as index j·d + i for ζ^i η^j.
    pub fn to_scaled_vector(&self, den_exp: u32) -> Vec<u64> {
        assert!(den_exp >= self.den_exp, "declared denominator too small");
        self.raise_den(den_exp).iter().flat_map(|c| c.raw().to_vec()).collect()
    }

    /// Precision of `to_scaled_vector(den_exp)` entries.
    pub fn scaled_reliable(&self, den_exp: u32) -> i64 {
        self.abs_prec + den_exp as i64
    }

    pub fn pow(&self, e: u64) -> Self {
        crate::ring::pow(self, e)
    }
}

impl fmt::Debug for TowerElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElt(level {}, p^-{}, prec {}) {:?}", self.level, self.den_exp, self.abs_prec, self.coords)
    }
}

impl PartialEq for TowerElt {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Add for TowerElt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = TowerElt::aligned(&self, &rhs);
        let den = a.den_exp.max(b.den_exp);
        let coords = a.raise_den(den).into_iter().zip(b.raise_den(den)).map(|(x, y)| x + y).collect();
        let mut t = TowerElt { level: a.level, den_exp: den, abs_prec: a.abs_prec.min(b.abs_prec), coords, tower: a.tower };
        t.canonicalize();
        t
    }
}

impl Sub for TowerElt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for TowerElt {
    type Output = Self;
    fn neg(self) -> Self {
        TowerElt { coords: self.coords.into_iter().map(|c| -c).collect(), ..self }
    }
}

fn reduce_cyclotomic(prod: &mut Vec<UnramifiedElt>, dim: usize, block: usize, p: usize) {
    for e in (dim..prod.len()).rev() {
        if prod[e].is_zero() {
            continue;
        }
        let z = prod[e].zero_like();
        let c = std::mem::replace(&mut prod[e], z);
        let base = e - dim;
        for k in 0..p - 1 {
            let t = base + k * block;
            prod[t] = prod[t].clone() - c.clone();
        }
    }
    prod.truncate(dim);
}

impl Mul for TowerElt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = TowerElt::aligned(&self, &rhs);
        let n = a.tower.prec() as i64;
        let va = a.valuation().unwrap_or(a.abs_prec);
        let vb = b.valuation().unwrap_or(b.abs_prec);
        let den = a.den_exp + b.den_exp;
        let prec = (a.abs_prec + vb).min(b.abs_prec + va).min(n - den as i64);
        let dim = a.coords.len();
        let p = a.tower.p() as usize;
        let zero = UnramifiedElt::zero(a.tower.field());
        let mut prod = vec![zero; (2 * dim).saturating_sub(1).max(1)];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        if a.level >= 0 {
            reduce_cyclotomic(&mut prod, dim, dim / (p - 1), p);
        }
        let mut t = TowerElt { level: a.level, den_exp: den, abs_prec: prec, coords: prod, tower: a.tower };
        t.canonicalize();
        t
    }
}

impl RingElem for TowerElt {
    fn zero_like(&self) -> Self {
        TowerElt::zero(&self.tower, self.level)
    }
    fn one_like(&self) -> Self {
        TowerElt::one(&self.tower, self.level)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        TowerElt::from_i64(&self.tower, self.level, n)
    }
}

/// ζ^{φ^{-(n+1)}}, the twisting unit attached to level n.
pub fn twist_unit(tower: &Arc<TowerDesc>, n: i64) -> UnramifiedElt {
    UnramifiedElt::zeta(tower.field()).frobenius(-(n + 1))
}

/// π_n = ζ^{φ^{-(n+1)}}(η_n - 1) for n ≥ 0, zero for n ≤ -1 (returned at level -1).
pub fn pi_n(tower: &Arc<TowerDesc>, n: i64) -> Result<TowerElt> {
    tower.check_level(n)?;
    if n < 0 {
        return Ok(TowerElt::zero(tower, -1));
    }
    let lam = TowerElt::eta(tower, n) - TowerElt::one(tower, n);
    Ok(lam.scale_base(&twist_unit(tower, n)))
}

pub fn galois_act(u: u64, f: i64, x: &TowerElt) -> Result<TowerElt> {
    x.galois_act(u, f)
}

pub fn trace(x: &TowerElt, target: i64) -> Result<TowerElt> {
    x.trace(target)
}

/// Outcome of an equality check carried out at finite precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionCheck {
    pub residual_valuation: i64,
    pub floor: i64,
    pub pass: bool,
}

impl PrecisionCheck {
    pub fn from_residual(residual: &TowerElt, floor: i64) -> Self {
        let r = residual.residual_valuation();
        PrecisionCheck { residual_valuation: r, floor, pass: r >= floor }
    }
}

/// Evaluates (π_n + ζ')^{p^m} - ζ'^{p^m} with ζ' = ζ^{φ^{-(n+1)}} and compares with π_{n-m}.
pub fn check_g_iterate(tower: &Arc<TowerDesc>, n: i64, m: u32) -> Result<PrecisionCheck> {
    tower.check_level(n)?;
    if n < -1 || n - (m as i64) < -2 {
        return Err(Error::InvalidParameter(format!("iterate m={m} at level {n}")));
    }
    let level = n.max(-1);
    let zp = twist_unit(tower, n);
    let x = pi_n(tower, n)?.lift_to(level);
    let base = x + TowerElt::from_base(tower, level, &zp);
    let pm = tower.p().pow(m);
    let lhs = base.pow(pm) - TowerElt::from_base(tower, level, &zp.pow(pm));
    let rhs = pi_n(tower, n - m as i64)?.lift_to(level);
    let residual = lhs - rhs;
    Ok(PrecisionCheck::from_residual(&residual, tower.prec() as i64))
}

/// Z_p-lattice of 𝔪_n inside k_n (coordinates as in `to_scaled_vector`).
pub fn maximal_ideal_lattice(tower: &Arc<TowerDesc>, n: i64) -> Result<Lattice> {
    tower.check_level(n)?;
    let d = tower.d();
    let field = tower.field();
    let mut cols = Vec::new();
    if n < 0 {
        for i in 0..d {
            let z = UnramifiedElt::zeta_pow(field, i as i64).mul_p_pow(1);
            cols.push(TowerElt::from_base(tower, -1, &z).to_scaled_vector(0));
        }
    } else {
        let lam = TowerElt::eta(tower, n) - TowerElt::one(tower, n);
        let eta = TowerElt::eta(tower, n);
        let mut ej = TowerElt::one(tower, n);
        for _ in 0..tower.level_dim(n) {
            let base = lam.clone() * ej.clone();
            for i in 0..d {
                let z = UnramifiedElt::zeta_pow(field, i as i64);
                cols.push(base.scale_base(&z).to_scaled_vector(0));
            }
            ej = ej * eta.clone();
        }
    }
    let m = ZpMatrix::from_columns(tower.zp(), tower.ambient_dim(n), &cols);
    Ok(Lattice::new(m, 0))
}

/// Lattice of the full ring of integers O_{k_n}.
pub fn integer_ring_lattice(tower: &Arc<TowerDesc>, n: i64) -> Lattice {
    let dim = tower.ambient_dim(n);
    Lattice::new(ZpMatrix::identity(tower.zp(), dim), 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u64, d: usize, prec: u32, n: i64) -> Arc<TowerDesc> {
        TowerDesc::new(p, d, prec, n).unwrap()
    }

    #[test]
    fn pi_examples() {
        let t = tower(3, 2, 4, 2);
        assert!(pi_n(&t, -1).unwrap().is_zero());
        assert!(pi_n(&t, -5).unwrap().is_zero());
        let p0 = pi_n(&t, 0).unwrap();
        assert_eq!(p0.level(), 0);
        assert!(!p0.is_zero());
        assert!(pi_n(&t, 3).is_err());
    }

    #[test]
    fn cyclotomic_relation_holds() {
        let t = tower(3, 1, 5, 2);
        for n in 0..=2 {
            let eta = TowerElt::eta(&t, n);
            let mut phi = TowerElt::zero(&t, n);
            let block = 3u64.pow(n as u32);
            for i in 0..3 {
                phi = phi + eta.pow(i * block);
            }
            assert!(phi.is_zero());
        }
    }

    #[test]
    fn trace_examples() {
        let t = tower(3, 2, 4, 2);
        let eta = TowerElt::eta(&t, 0);
        assert_eq!(eta.trace(-1).unwrap(), TowerElt::from_i64(&t, -1, -1));
        assert_eq!(TowerElt::one(&t, 0).trace(-1).unwrap(), TowerElt::from_i64(&t, -1, 2));
        for n in 1..=2 {
            let one = TowerElt::one(&t, n);
            assert_eq!(one.trace(n - 1).unwrap(), TowerElt::from_i64(&t, n - 1, 3));
        }
    }

    #[test]
    fn galois_examples() {
        let t = tower(5, 2, 3, 1);
        let eta = TowerElt::eta(&t, 1);
        assert_eq!(eta.galois_act(1, 0).unwrap(), eta);
        assert_eq!(eta.galois_act(7, 0).unwrap(), eta.pow(7));
        let z = UnramifiedElt::zeta(t.field());
        let x = eta.scale_base(&z);
        assert_eq!(x.galois_act(1, 1).unwrap(), eta.scale_base(&z.pow(5)));
        assert!(eta.galois_act(10, 0).is_err());
    }

    #[test]
    fn g_iterate_examples() {
        let t = tower(3, 2, 4, 2);
        assert!(check_g_iterate(&t, 0, 1).unwrap().pass);
        assert!(check_g_iterate(&t, 2, 0).unwrap().pass);
        let r = check_g_iterate(&t, 2, 2).unwrap();
        assert!(r.pass && r.residual_valuation >= 4);
    }

    #[test]
    fn denominators_canonical() {
        let t = tower(3, 1, 6, 0);
        let x = TowerElt::from_i64(&t, 0, 9).div_p_pow(1);
        assert_eq!(x.den_exp(), 0);
        assert_eq!(x, TowerElt::from_i64(&t, 0, 3));
        let y = TowerElt::one(&t, 0).div_p_pow(2);
        assert_eq!(y.den_exp(), 2);
        assert_eq!(y.mul_p_pow(2), TowerElt::one(&t, 0));
    }

    #[test]
    fn maximal_ideal_examples() {
        let t = tower(3, 2, 8, 1);
        let m = maximal_ideal_lattice(&t, -1).unwrap();
        assert_eq!(m.elementary_divisors(), vec![1, 1]);
        let t1 = tower(3, 1, 8, 0);
        let m0 = maximal_ideal_lattice(&t1, 0).unwrap();
        assert_eq!(m0.rank(), 2);
        assert_eq!(m0.elementary_divisors().iter().sum::<u32>(), 1);
    }
}
