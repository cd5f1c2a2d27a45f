//! Power series truncated at a fixed total degree.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::ring::RingElem;

/// Univariate series known through degree `D` (coefficients 0..=D).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R: RingElem> {
    coeffs: Vec<R>,
}

impl<R: RingElem> TruncSeries<R> {
    /// Pads or truncates `coeffs` to degree bound `deg`; `proto` supplies the zero.
    pub fn new(mut coeffs: Vec<R>, deg: usize, proto: &R) -> Self {
        coeffs.resize(deg + 1, proto.zero_like());
        TruncSeries { coeffs }
    }

    pub fn zero(deg: usize, proto: &R) -> Self {
        TruncSeries { coeffs: vec![proto.zero_like(); deg + 1] }
    }

    /// The series X.
    pub fn var(deg: usize, proto: &R) -> Self {
        let mut s = Self::zero(deg, proto);
        if deg >= 1 {
            s.coeffs[1] = proto.one_like();
        }
        s
    }

    pub fn constant(c: R, deg: usize) -> Self {
        let mut s = Self::zero(deg, &c);
        s.coeffs[0] = c;
        s
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: R) {
        self.coeffs[i] = c;
    }

    pub fn proto(&self) -> &R {
        &self.coeffs[0]
    }

    pub fn truncate(&self, deg: usize) -> Self {
        let p = self.proto().clone();
        TruncSeries::new(self.coeffs.iter().take(deg + 1).cloned().collect(), deg, &p)
    }

    pub fn scale(&self, c: &R) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn map<S: RingElem>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Formal derivative, valid through degree D - 1.
    pub fn derivative(&self) -> Self {
        let d = self.degree_bound();
        let p = self.proto().clone();
        let c = (1..=d).map(|i| self.coeffs[i].clone() * p.from_i64_like(i as i64)).collect();
        TruncSeries::new(c, d.saturating_sub(1), &p)
    }

    /// Lowest index of a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_elem())
    }

    /// self ∘ g for g without constant term, through the smaller degree bound.
    pub fn compose(&self, g: &TruncSeries<R>) -> Self {
        debug_assert!(g.coeffs[0].is_zero_elem(), "inner series must vanish at 0");
        let d = self.degree_bound().min(g.degree_bound());
        let g = g.truncate(d);
        let mut acc = TruncSeries::zero(d, self.proto());
        for i in (0..=d).rev() {
            acc = acc * g.clone();
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[i].clone();
        }
        acc
    }

    /// Multiplicative inverse given the inverse of the constant term.
    pub fn inverse_with(&self, c0_inv: &R) -> Self {
        let d = self.degree_bound();
        let mut out = Self::zero(d, self.proto());
        out.coeffs[0] = c0_inv.clone();
        for n in 1..=d {
            let mut s = self.proto().zero_like();
            for k in 1..=n {
                s = s + self.coeffs[k].clone() * out.coeffs[n - k].clone();
            }
            out.coeffs[n] = -(s * c0_inv.clone());
        }
        out
    }

    /// Horner evaluation at an element of another ring through `embed`.
    pub fn eval_with<S: RingElem>(&self, x: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + embed(c);
        }
        acc
    }

    pub fn eval(&self, x: &R) -> R {
        self.eval_with(x, Clone::clone)
    }

    /// Compositional inverse by Newton iteration; needs only the inverse of f'(0).
    pub fn reversion_with(&self, c1_inv: &R) -> Self {
        let d = self.degree_bound();
        let x = Self::var(d, self.proto());
        let df = self.derivative();
        let mut g = x.scale(c1_inv);
        let mut reach = 1usize;
        while reach < d {
            reach *= 2;
            let err = self.compose(&g) - x.clone();
            let slope = TruncSeries::new(df.compose(&g.truncate(d - 1)).coeffs, d, self.proto());
            g = g - err * slope.inverse_with(c1_inv);
        }
        g
    }
}

impl<R: RingElem + Div<Output = R>> TruncSeries<R> {
    /// Antiderivative with zero constant term; raises the degree bound by one.
    pub fn integrate(&self) -> Self {
        let d = self.degree_bound();
        let p = self.proto().clone();
        let mut c = vec![p.zero_like()];
        c.extend((0..=d).map(|i| self.coeffs[i].clone() / p.from_i64_like(i as i64 + 1)));
        TruncSeries::new(c, d + 1, &p)
    }

    /// Compositional inverse of a series with f(0) = 0 and invertible f'(0), by Lagrange inversion.
    pub fn reversion(&self) -> Self {
        let d = self.degree_bound();
        let p = self.proto().clone();
        assert!(self.coeffs[0].is_zero_elem(), "reversion needs f(0) = 0");
        // h = X / f(X)
        let shifted = TruncSeries::new(self.coeffs[1..].to_vec(), d.saturating_sub(1), &p);
        let h = shifted.inverse_with(&(p.one_like() / self.coeffs[1].clone()));
        let mut out = Self::zero(d, &p);
        let mut hp = TruncSeries::constant(p.one_like(), d.saturating_sub(1));
        for n in 1..=d {
            hp = hp * h.clone();
            out.coeffs[n] = hp.coeffs[n - 1].clone() / p.from_i64_like(n as i64);
        }
        out
    }
}

impl<R: RingElem> Add for TruncSeries<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.degree_bound().min(rhs.degree_bound());
        TruncSeries { coeffs: (0..=d).map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()).collect() }
    }
}

impl<R: RingElem> Sub for TruncSeries<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let d = self.degree_bound().min(rhs.degree_bound());
        TruncSeries { coeffs: (0..=d).map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone()).collect() }
    }
}

impl<R: RingElem> Neg for TruncSeries<R> {
    type Output = Self;
    fn neg(self) -> Self {
        TruncSeries { coeffs: self.coeffs.into_iter().map(|a| -a).collect() }
    }
}

impl<R: RingElem> Mul for TruncSeries<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.degree_bound().min(rhs.degree_bound());
        let mut c = vec![self.proto().zero_like(); d + 1];
        for i in 0..=d {
            let a = &self.coeffs[i];
            if a.is_zero_elem() {
                continue;
            }
            for j in 0..=d - i {
                let b = &rhs.coeffs[j];
                if !b.is_zero_elem() {
                    c[i + j] = c[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        TruncSeries { coeffs: c }
    }
}

impl<R: RingElem> RingElem for TruncSeries<R> {
    fn zero_like(&self) -> Self {
        TruncSeries::zero(self.degree_bound(), self.proto())
    }
    fn one_like(&self) -> Self {
        TruncSeries::constant(self.proto().one_like(), self.degree_bound())
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero_elem)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        TruncSeries::constant(self.proto().from_i64_like(n), self.degree_bound())
    }
}

/// Bivariate series known through total degree `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<R: RingElem> {
    deg: usize,
    /// c[i][j] is the coefficient of X^i Y^j, i + j <= D.
    coeffs: Vec<Vec<R>>,
}

impl<R: RingElem> BiSeries<R> {
    pub fn zero(deg: usize, proto: &R) -> Self {
        let coeffs = (0..=deg).map(|i| vec![proto.zero_like(); deg + 1 - i]).collect();
        BiSeries { deg, coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.deg
    }

    fn proto(&self) -> &R {
        &self.coeffs[0][0]
    }

    pub fn coeff(&self, i: usize, j: usize) -> &R {
        &self.coeffs[i][j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: R) {
        self.coeffs[i][j] = c;
    }

    /// f(X) as a bivariate series.
    pub fn from_x(f: &TruncSeries<R>, deg: usize) -> Self {
        let mut s = Self::zero(deg, f.proto());
        for i in 0..=deg.min(f.degree_bound()) {
            s.coeffs[i][0] = f.coeff(i).clone();
        }
        s
    }

    /// f(Y) as a bivariate series.
    pub fn from_y(f: &TruncSeries<R>, deg: usize) -> Self {
        let mut s = Self::zero(deg, f.proto());
        for j in 0..=deg.min(f.degree_bound()) {
            s.coeffs[0][j] = f.coeff(j).clone();
        }
        s
    }

    pub fn constant(c: R, deg: usize) -> Self {
        let mut s = Self::zero(deg, &c);
        s.coeffs[0][0] = c;
        s
    }

    pub fn scale(&self, c: &R) -> Self {
        BiSeries {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|row| row.iter().map(|a| a.clone() * c.clone()).collect()).collect(),
        }
    }

    /// f(self) for a univariate f, self without constant term.
    pub fn substitute_into(&self, f: &TruncSeries<R>) -> Self {
        debug_assert!(self.coeffs[0][0].is_zero_elem());
        let mut acc = Self::zero(self.deg, self.proto());
        for i in (0..=self.deg.min(f.degree_bound())).rev() {
            acc = acc * self.clone();
            acc.coeffs[0][0] = acc.coeffs[0][0].clone() + f.coeff(i).clone();
        }
        acc
    }

    pub fn inverse_with(&self, c0_inv: &R) -> Self {
        // 1/(c0 + u) = c0^{-1} Σ (-c0^{-1} u)^k
        let mut u = self.clone();
        u.coeffs[0][0] = u.proto().zero_like();
        let t = (-u).scale(c0_inv);
        let mut acc = Self::constant(self.proto().one_like(), self.deg);
        let mut term = acc.clone();
        for _ in 0..self.deg {
            term = term * t.clone();
            acc = acc + term.clone();
        }
        acc.scale(c0_inv)
    }

    /// F(Y, X).
    pub fn swapped(&self) -> Self {
        let mut s = Self::zero(self.deg, self.proto());
        for i in 0..=self.deg {
            for j in 0..=self.deg - i {
                s.coeffs[j][i] = self.coeffs[i][j].clone();
            }
        }
        s
    }

    /// F(X, 0).
    pub fn restrict_y0(&self) -> TruncSeries<R> {
        TruncSeries::new((0..=self.deg).map(|i| self.coeffs[i][0].clone()).collect(), self.deg, self.proto())
    }

    pub fn eval_with<S: RingElem>(&self, x: &S, y: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = x.zero_like();
        for i in (0..=self.deg).rev() {
            let mut row = x.zero_like();
            for j in (0..=self.deg - i).rev() {
                row = row * y.clone() + embed(&self.coeffs[i][j]);
            }
            acc = acc * x.clone() + row;
        }
        acc
    }

    /// Bivariate composition F(G, H) for G, H without constant terms.
    pub fn compose(&self, g: &BiSeries<R>, h: &BiSeries<R>) -> Self {
        let deg = self.deg.min(g.deg).min(h.deg);
        let mut acc = Self::zero(deg, self.proto());
        let mut gp = Self::constant(self.proto().one_like(), deg);
        for i in 0..=deg {
            let mut row = Self::zero(deg, self.proto());
            let mut hp = Self::constant(self.proto().one_like(), deg);
            for j in 0..=deg - i {
                if !self.coeffs[i][j].is_zero_elem() {
                    row = row + hp.scale(&self.coeffs[i][j]);
                }
                hp = hp * h.clone();
            }
            acc = acc + gp.clone() * row;
            gp = gp * g.clone();
        }
        acc
    }
}

impl<R: RingElem> Add for BiSeries<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let deg = self.deg.min(rhs.deg);
        let coeffs = (0..=deg)
            .map(|i| (0..=deg - i).map(|j| self.coeffs[i][j].clone() + rhs.coeffs[i][j].clone()).collect())
            .collect();
        BiSeries { deg, coeffs }
    }
}

impl<R: RingElem> Sub for BiSeries<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: RingElem> Neg for BiSeries<R> {
    type Output = Self;
    fn neg(self) -> Self {
        BiSeries { deg: self.deg, coeffs: self.coeffs.into_iter().map(|r| r.into_iter().map(|a| -a).collect()).collect() }
    }
}

impl<R: RingElem> Mul for BiSeries<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let deg = self.deg.min(rhs.deg);
        let mut out = Self::zero(deg, self.proto());
        for i1 in 0..=deg {
            for j1 in 0..=deg - i1 {
                let a = &self.coeffs[i1][j1];
                if a.is_zero_elem() {
                    continue;
                }
                let rem = deg - i1 - j1;
                for i2 in 0..=rem {
                    for j2 in 0..=rem - i2 {
                        let b = &rhs.coeffs[i2][j2];
                        if !b.is_zero_elem() {
                            let c = &mut out.coeffs[i1 + i2][j1 + j2];
                            *c = c.clone() + a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_log_reversion() {
        // log(1+X) and exp(X)-1 are mutually inverse.
        let d = 12;
        let zero = q(0, 1);
        let log1p: Vec<_> = (0..=d)
            .map(|i| if i == 0 { q(0, 1) } else { q(if i % 2 == 1 { 1 } else { -1 }, i as i64) })
            .collect();
        let f = TruncSeries::new(log1p, d, &zero);
        let g = f.reversion();
        let mut fact = 1i64;
        for i in 1..=d {
            fact *= i as i64;
            assert_eq!(g.coeff(i), &q(1, fact));
        }
        let id = f.compose(&g);
        assert_eq!(id, TruncSeries::var(d, &zero));
    }

    #[test]
    fn bivariate_product_and_inverse() {
        let zero = q(0, 1);
        let d = 6;
        let x = BiSeries::from_x(&TruncSeries::var(d, &zero), d);
        let y = BiSeries::from_y(&TruncSeries::var(d, &zero), d);
        let s = BiSeries::constant(q(1, 1), d) + x.clone() + y.clone();
        let inv = s.inverse_with(&q(1, 1));
        let prod = s * inv;
        assert_eq!(prod, BiSeries::constant(q(1, 1), d));
    }
}
