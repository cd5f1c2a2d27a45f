//! Smith normal form over Z/p^N by minimal-valuation pivoting.
//!
//! Z/p^N is a local principal ideal ring, so a pivot of least valuation in the
//! remaining block divides every other entry and elimination never divides by
//! a non-unit beyond what the pivot already certifies.

use serde::{Deserialize, Serialize};

use super::matrix::ZpMatrix;
use crate::error::{Error, Result};

/// Valuations at or above `N - margin` are treated as zero at precision.
pub const DEFAULT_MARGIN: u32 = 2;

#[derive(Clone, Debug)]
pub struct SnfResult {
    diag: Vec<u32>,
    prec: u32,
    rows: usize,
    cols: usize,
    u: Option<ZpMatrix>,
    v: Option<ZpMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfCertificate {
    pub product_matches: bool,
    pub u_det_valuation: Option<u32>,
    pub v_det_valuation: Option<u32>,
}

impl SnfCertificate {
    pub fn is_valid(&self) -> bool {
        self.product_matches && self.u_det_valuation == Some(0) && self.v_det_valuation == Some(0)
    }
}

impl SnfResult {
    /// Diagonal valuations, non-decreasing, length min(rows, cols); `N` encodes zero.
    pub fn diagonal(&self) -> &[u32] {
        &self.diag
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rank(&self, margin: u32) -> usize {
        let cut = self.prec.saturating_sub(margin);
        self.diag.iter().filter(|&&e| e < cut).count()
    }

    /// Nonzero elementary divisors p^e with 0 < e < N - margin.
    pub fn torsion(&self, margin: u32) -> Vec<u32> {
        let cut = self.prec.saturating_sub(margin);
        self.diag.iter().copied().filter(|&e| e > 0 && e < cut).collect()
    }

    /// Diagonal entries that are nonzero but within `margin` of p^N.
    pub fn ambiguous(&self, margin: u32) -> Vec<u32> {
        let cut = self.prec.saturating_sub(margin);
        self.diag.iter().copied().filter(|&e| e >= cut && e < self.prec).collect()
    }

    pub fn u(&self) -> Option<&ZpMatrix> {
        self.u.as_ref()
    }
    pub fn v(&self) -> Option<&ZpMatrix> {
        self.v.as_ref()
    }

    /// Checks U·A·V = diag(p^e) exactly and that U, V are invertible.
    pub fn certify(&self, a: &ZpMatrix) -> Option<SnfCertificate> {
        let (u, v) = (self.u.as_ref()?, self.v.as_ref()?);
        let prod = u.mul(a).mul(v);
        let z = a.ctx();
        let mut ok = prod.rows() == self.rows && prod.cols() == self.cols;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !ok {
                    break;
                }
                let x = prod.get(i, j);
                if i != j {
                    ok = x == 0;
                } else {
                    ok = z.val_raw(x) == self.diag[i].min(z.prec());
                }
            }
        }
        Some(SnfCertificate {
            product_matches: ok,
            u_det_valuation: u.inverse().ok().map(|_| 0),
            v_det_valuation: v.inverse().ok().map(|_| 0),
        })
    }
}

struct Tracking<'a> {
    aug: Option<&'a mut ZpMatrix>,
    v: Option<&'a mut ZpMatrix>,
}

fn eliminate(a: &mut ZpMatrix, mut tr: Tracking<'_>) -> Vec<u32> {
    let z = a.ctx();
    let prec = z.prec();
    let (m, n) = (a.rows(), a.cols());
    let kmax = m.min(n);
    let mut diag = vec![prec; kmax];
    for k in 0..kmax {
        // Pivot search: least valuation in the trailing block, stop at a unit.
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for i in k..m {
            let row = a.row(i);
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x != 0 {
                    let e = z.val_raw(x);
                    if best.map_or(true, |b| e < b.2) {
                        best = Some((i, j, e));
                        if e == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((pi, pj, e)) = best else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        if let Some(aug) = tr.aug.as_deref_mut() {
            aug.swap_rows(k, pi);
        }
        if let Some(v) = tr.v.as_deref_mut() {
            v.swap_cols(k, pj);
        }
        diag[k] = e;
        let piv = a.get(k, k);
        let unit_inv = z.inv_raw(z.div_p_pow_raw(piv, e) % z.modulus()).expect("unit part");
        for i in k + 1..m {
            let r = a.get(i, k);
            if r == 0 {
                continue;
            }
            let f = z.mul_raw(z.div_p_pow_raw(r, e), unit_inv);
            let nf = z.neg_raw(f);
            // Only columns >= k can be nonzero in rows >= k.
            for j in k..n {
                let s = a.get(k, j);
                if s != 0 {
                    let cur = a.get(i, j);
                    a.set(i, j, z.add_raw(cur, z.mul_raw(nf, s)));
                }
            }
            if let Some(aug) = tr.aug.as_deref_mut() {
                aug.axpy_row(i, k, nf);
            }
        }
        if let Some(v) = tr.v.as_deref_mut() {
            for j in k + 1..n {
                let r = a.get(k, j);
                if r == 0 {
                    continue;
                }
                let g = z.mul_raw(z.div_p_pow_raw(r, e), unit_inv);
                v.axpy_col(j, k, z.neg_raw(g));
                a.set(k, j, 0);
            }
        }
    }
    diag
}

/// Elementary-divisor valuations only.
pub fn snf(a: &ZpMatrix) -> SnfResult {
    let mut w = a.clone();
    let diag = eliminate(&mut w, Tracking { aug: None, v: None });
    SnfResult { diag, prec: a.ctx().prec(), rows: a.rows(), cols: a.cols(), u: None, v: None }
}

/// SNF with both transformation matrices, so that U·A·V = diag.
pub fn snf_full(a: &ZpMatrix) -> SnfResult {
    let z = a.ctx();
    let mut w = a.clone();
    let mut u = ZpMatrix::identity(z, a.rows());
    let mut v = ZpMatrix::identity(z, a.cols());
    let diag = eliminate(&mut w, Tracking { aug: Some(&mut u), v: Some(&mut v) });
    SnfResult { diag, prec: z.prec(), rows: a.rows(), cols: a.cols(), u: Some(u), v: Some(v) }
}

/// SNF of `a` with the row transform applied to `rhs` (returns U·rhs).
pub fn snf_with_rhs(a: &ZpMatrix, rhs: &ZpMatrix) -> (SnfResult, ZpMatrix) {
    assert_eq!(a.rows(), rhs.rows());
    let mut w = a.clone();
    let mut r = rhs.clone();
    let diag = eliminate(&mut w, Tracking { aug: Some(&mut r), v: None });
    (SnfResult { diag, prec: a.ctx().prec(), rows: a.rows(), cols: a.cols(), u: None, v: None }, r)
}

/// Saturated basis (columns) of the kernel of `a`, treating entries within `margin` of p^N as zero.
pub fn kernel(a: &ZpMatrix, margin: u32) -> ZpMatrix {
    let z = a.ctx();
    let mut w = a.clone();
    let mut v = ZpMatrix::identity(z, a.cols());
    let diag = eliminate(&mut w, Tracking { aug: None, v: Some(&mut v) });
    let cut = z.prec().saturating_sub(margin);
    let rank = diag.iter().filter(|&&e| e < cut).count();
    let idx: Vec<usize> = (rank..a.cols()).collect();
    v.select_columns(&idx)
}

/// Result of testing whether vectors lie in the column span of a matrix.
#[derive(Clone, Debug)]
pub struct Membership {
    pub members: Vec<bool>,
    /// Least valuation among obstructing coordinates per vector (`None` when a member).
    pub obstruction: Vec<Option<u32>>,
    pub ambiguous: bool,
}

/// Decides membership of each column of `vs` in the Z_p-span of the columns of `b`.
pub fn membership(b: &ZpMatrix, vs: &ZpMatrix, margin: u32) -> Membership {
    let z = b.ctx();
    let (s, w) = snf_with_rhs(b, vs);
    let cut = z.prec().saturating_sub(margin);
    let diag = s.diagonal();
    let rank = s.rank(margin);
    let mut members = Vec::with_capacity(vs.cols());
    let mut obstruction = Vec::with_capacity(vs.cols());
    let mut ambiguous = s.ambiguous(margin).iter().any(|_| true);
    for j in 0..vs.cols() {
        let mut worst: Option<u32> = None;
        for i in 0..w.rows() {
            let x = w.get(i, j);
            if x == 0 {
                continue;
            }
            let e = z.val_raw(x);
            let bad = if i < rank { e < diag[i] } else { e < cut };
            if bad {
                worst = Some(worst.map_or(e, |c| c.min(e)));
            } else if i >= rank && e < z.prec() {
                ambiguous = true;
            }
        }
        members.push(worst.is_none());
        obstruction.push(worst);
    }
    Membership { members, obstruction, ambiguous }
}

/// Rank with the rerun-at-higher-precision discipline: `build(N)` must produce
/// the same matrix at precision `N`; the rank must agree at N and N + 4.
pub fn stabilized_rank<F>(build: F, prec: u32, margin: u32) -> Result<usize>
where
    F: Fn(u32) -> Result<ZpMatrix>,
{
    let r1 = snf(&build(prec)?);
    let r2 = snf(&build(prec + 4)?);
    let (a, b) = (r1.rank(margin), r2.rank(margin));
    if a != b || !r2.ambiguous(margin).is_empty() {
        return Err(Error::PrecisionExhausted(format!(
            "rank {a} at N={prec} vs {b} at N={}",
            prec + 4
        )));
    }
    Ok(b)
}
