use super::matrix::ZpMatrix;
use super::snf::{self, Membership, SnfResult, DEFAULT_MARGIN};
use crate::padic::Zp;

/// A finitely generated Z_p-submodule of Q_p^D, stored as p^den_exp times the
/// generator columns.
///
/// `reliable` is the p-adic precision to which the scaled coordinates are
/// actually known; it never exceeds the residue precision.
#[derive(Clone, Debug)]
pub struct Lattice {
    gens: ZpMatrix,
    den_exp: u32,
    reliable: u32,
    margin: u32,
}

impl Lattice {
    pub fn new(gens: ZpMatrix, den_exp: u32) -> Self {
        let reliable = gens.ctx().prec();
        Lattice { gens, den_exp, reliable, margin: DEFAULT_MARGIN }
    }

    pub fn with_reliable(mut self, reliable: u32) -> Self {
        self.reliable = reliable.min(self.gens.ctx().prec());
        self
    }

    pub fn with_margin(mut self, margin: u32) -> Self {
        self.margin = margin;
        self
    }

    pub fn zero(ctx: Zp, dim: usize, den_exp: u32) -> Self {
        Lattice::new(ZpMatrix::zeros(ctx, dim, 0), den_exp)
    }

    pub fn gens(&self) -> &ZpMatrix {
        &self.gens
    }
    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }
    pub fn reliable(&self) -> u32 {
        self.reliable
    }
    pub fn margin(&self) -> u32 {
        self.margin
    }
    pub fn ambient_dim(&self) -> usize {
        self.gens.rows()
    }
    pub fn ctx(&self) -> Zp {
        self.gens.ctx()
    }

    /// Margin measured against the full residue precision.
    fn effective_margin(&self) -> u32 {
        self.margin + (self.ctx().prec() - self.reliable)
    }

    pub fn snf(&self) -> SnfResult {
        snf::snf(&self.gens)
    }

    pub fn rank(&self) -> usize {
        self.snf().rank(self.effective_margin())
    }

    /// Elementary divisors of the generator matrix, zero-at-precision entries removed.
    pub fn elementary_divisors(&self) -> Vec<u32> {
        let m = self.effective_margin();
        let s = self.snf();
        let cut = s.prec().saturating_sub(m);
        s.diagonal().iter().copied().filter(|&e| e < cut).collect()
    }

    pub fn is_ambiguous(&self) -> bool {
        !self.snf().ambiguous(self.effective_margin()).is_empty()
    }

    /// Re-express with a larger common denominator.
    pub fn rescale(&self, den_exp: u32) -> Lattice {
        assert!(den_exp >= self.den_exp, "rescaling can only enlarge the denominator");
        let shift = den_exp - self.den_exp;
        let z = self.ctx();
        let f = z.p_pow(shift);
        let mut g = self.gens.clone();
        for i in 0..g.rows() {
            g.scale_row(i, f);
        }
        Lattice { gens: g, den_exp, reliable: (self.reliable + shift).min(z.prec()), margin: self.margin }
    }

    fn aligned(&self, other: &Lattice) -> (Lattice, Lattice) {
        let d = self.den_exp.max(other.den_exp);
        (self.rescale(d), other.rescale(d))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let (a, b) = self.aligned(other);
        Lattice {
            gens: a.gens.hstack(&b.gens),
            den_exp: a.den_exp,
            reliable: a.reliable.min(b.reliable),
            margin: a.margin.max(b.margin),
        }
    }

    /// Intersection via the kernel of [A | -B].
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let (a, b) = self.aligned(other);
        let reliable = a.reliable.min(b.reliable);
        let margin = a.margin.max(b.margin) + (a.ctx().prec() - reliable);
        let stacked = a.gens.hstack(&b.gens.neg());
        let k = snf::kernel(&stacked, margin);
        let top: Vec<usize> = (0..a.gens.cols()).collect();
        let x = k.select_rows(&top);
        Lattice { gens: a.gens.mul(&x), den_exp: a.den_exp, reliable, margin: a.margin.max(b.margin) }
    }

    /// Membership of each column of `vs`, given in the same denominator convention.
    pub fn contains_columns(&self, vs: &ZpMatrix) -> Membership {
        snf::membership(&self.gens, vs, self.effective_margin())
    }

    /// Is every generator of `other` in `self`?
    pub fn contains(&self, other: &Lattice) -> bool {
        let (a, b) = self.aligned(other);
        let reliable = a.reliable.min(b.reliable);
        let margin = a.margin.max(b.margin) + (a.ctx().prec() - reliable);
        if b.gens.cols() == 0 {
            return true;
        }
        snf::membership(&a.gens, &b.gens, margin).members.iter().all(|&m| m)
    }

    /// Equality by mutual membership.
    pub fn equals(&self, other: &Lattice) -> bool {
        self.contains(other) && other.contains(self)
    }

    pub fn project(&self, rows: &[usize]) -> Lattice {
        Lattice { gens: self.gens.select_rows(rows), ..self.clone() }
    }

    pub fn num_generators(&self) -> usize {
        self.gens.cols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_and_intersection() {
        let z = Zp::new(3, 10).unwrap();
        let a = Lattice::new(ZpMatrix::from_rows_i64(z, &[vec![1, 0], vec![0, 3], vec![0, 0]]), 0);
        let b = Lattice::new(ZpMatrix::from_rows_i64(z, &[vec![3, 0], vec![0, 1], vec![0, 0]]), 0);
        let i = a.intersect(&b);
        let expect = Lattice::new(ZpMatrix::from_rows_i64(z, &[vec![3, 0], vec![0, 3], vec![0, 0]]), 0);
        assert!(i.equals(&expect));
        assert_eq!(a.sum(&b).rank(), 2);
        assert!(!a.equals(&b));
    }

    #[test]
    fn rescale_preserves_membership() {
        let z = Zp::new(5, 8).unwrap();
        let a = Lattice::new(ZpMatrix::from_rows_i64(z, &[vec![1], vec![5]]), 0);
        let b = Lattice::new(ZpMatrix::from_rows_i64(z, &[vec![5], vec![25]]), 1);
        assert!(a.equals(&b));
    }
}
