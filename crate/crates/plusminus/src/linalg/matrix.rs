use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{PAdicInt, Zp};

/// Dense row-major matrix over Z/p^N.
#[derive(Clone, PartialEq, Eq)]
pub struct ZpMatrix {
    ctx: Zp,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZpMatrix {
    pub fn zeros(ctx: Zp, rows: usize, cols: usize) -> Self {
        ZpMatrix { ctx, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: Zp, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % ctx.modulus();
        }
        m
    }

    pub fn from_rows_i64(ctx: Zp, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(ctx, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ctx.from_i64(v).value());
            }
        }
        m
    }

    /// Columns given as raw residue vectors of equal length `rows`.
    pub fn from_columns(ctx: Zp, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(ctx, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v % ctx.modulus();
            }
        }
        m
    }

    pub fn ctx(&self) -> Zp {
        self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }
    pub fn entry(&self, i: usize, j: usize) -> PAdicInt {
        self.ctx.elem(self.get(i, j))
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let z = self.ctx;
        let mut out = Self::zeros(z, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = z.add_raw(out.data[idx], z.mul_raw(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let z = self.ctx;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| z.add_raw(acc, z.mul_raw(a, b)))
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, rhs: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        let mut out = Self::zeros(self.ctx, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(rhs.row(i));
        }
        out
    }

    pub fn neg(&self) -> ZpMatrix {
        let z = self.ctx;
        ZpMatrix { data: self.data.iter().map(|&a| z.neg_raw(a)).collect(), ..self.clone() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> ZpMatrix {
        let mut out = Self::zeros(self.ctx, idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            out.data[r * self.cols..(r + 1) * self.cols].copy_from_slice(self.row(i));
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> ZpMatrix {
        let mut out = Self::zeros(self.ctx, self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                out.set(i, c, self.get(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    /// Reduction to a lower precision of the same prime.
    pub fn reduce(&self, ctx: Zp) -> ZpMatrix {
        assert_eq!(ctx.p(), self.ctx.p());
        let m = ctx.modulus();
        ZpMatrix { ctx, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a % m).collect() }
    }

    /// Inverse of a square matrix that is invertible mod p.
    pub fn inverse(&self) -> Result<ZpMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let z = self.ctx;
        let mut a = self.clone();
        let mut inv = Self::identity(z, n);
        for k in 0..n {
            let piv = (k..n)
                .find(|&i| a.get(i, k) % z.p() != 0)
                .ok_or_else(|| Error::NotUnit("matrix is singular mod p".into()))?;
            a.swap_rows(k, piv);
            inv.swap_rows(k, piv);
            let pinv = z.inv_raw(a.get(k, k)).expect("unit pivot");
            a.scale_row(k, pinv);
            inv.scale_row(k, pinv);
            for i in 0..n {
                if i != k {
                    let f = a.get(i, k);
                    if f != 0 {
                        a.axpy_row(i, k, z.neg_raw(f));
                        inv.axpy_row(i, k, z.neg_raw(f));
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn scale_row(&mut self, i: usize, f: u64) {
        let z = self.ctx;
        for v in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *v = z.mul_raw(*v, f);
        }
    }

    /// row[dst] += f * row[src]
    pub fn axpy_row(&mut self, dst: usize, src: usize, f: u64) {
        if f == 0 {
            return;
        }
        let z = self.ctx;
        let c = self.cols;
        for j in 0..c {
            let s = self.data[src * c + j];
            if s != 0 {
                let d = &mut self.data[dst * c + j];
                *d = z.add_raw(*d, z.mul_raw(f, s));
            }
        }
    }

    /// col[dst] += f * col[src]
    pub fn axpy_col(&mut self, dst: usize, src: usize, f: u64) {
        if f == 0 {
            return;
        }
        let z = self.ctx;
        let c = self.cols;
        for i in 0..self.rows {
            let s = self.data[i * c + src];
            if s != 0 {
                let d = &mut self.data[i * c + dst];
                *d = z.add_raw(*d, z.mul_raw(f, s));
            }
        }
    }

    /// Determinant valuation via elimination with minimal-valuation pivots.
    pub fn det_valuation(&self) -> Option<u32> {
        assert_eq!(self.rows, self.cols);
        let s = super::snf::snf(self);
        let n = self.ctx.prec();
        let mut total = 0u32;
        for &v in s.diagonal() {
            if v >= n {
                return None;
            }
            total += v;
        }
        Some(total)
    }
}

impl fmt::Debug for ZpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZpMatrix {}x{} mod {}^{}", self.rows, self.cols, self.ctx.p(), self.ctx.prec())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&a| self.ctx.signed(a).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
