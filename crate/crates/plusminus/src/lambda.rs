//! Finitely presented modules over Z_p[G_{-1}][X] and over Λ = Z_p[[X]].
//!
//! A `Presentation` is R^g modulo the R-span of its relation rows. Modules that
//! are finitely generated over Z_p are flattened to a Z_p-matrix; Λ-module
//! invariants (M^Γ, M_Γ, Λ-rank) are computed from the relation matrix and the
//! constant terms of its syzygies.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_ring::{delta_of, omega_family, phi_plus_phi_inv, q_values, to_grpoly, GRPoly, GroupRingElt};
use crate::linalg::{kernel, snf, SnfResult, ZpMatrix, DEFAULT_MARGIN};
use crate::padic::Zp;
use crate::poly::Poly;

#[derive(Clone, PartialEq)]
pub struct Presentation {
    zp: Zp,
    d: usize,
    gens: usize,
    relations: Vec<Vec<GRPoly>>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Presentation(p={}, d={}, g={}, r={})", self.zp.p(), self.d, self.gens, self.relations.len())?;
        for (s, row) in self.relations.iter().enumerate() {
            let entries: Vec<String> = row
                .iter()
                .map(|e| {
                    let c: Vec<Vec<i128>> =
                        e.coeffs().iter().map(|g| g.coeffs().iter().map(|&x| self.zp.signed(x)).collect()).collect();
                    format!("{c:?}")
                })
                .collect();
            writeln!(f, "  ρ{s} = ({})", entries.join(", "))?;
        }
        Ok(())
    }
}

impl Presentation {
    pub fn new(zp: Zp, d: usize, gens: usize, relations: Vec<Vec<GRPoly>>) -> Result<Self> {
        if relations.iter().any(|r| r.len() != gens) {
            return Err(Error::InvalidParameter("relation length differs from the number of generators".into()));
        }
        if relations.iter().flatten().flat_map(|p| p.coeffs()).any(|c| c.d() != d || c.zp() != zp) {
            return Err(Error::InvalidParameter("relation coefficients live in a different group ring".into()));
        }
        Ok(Presentation { zp, d, gens, relations })
    }

    /// R^g with no relations.
    pub fn free(zp: Zp, d: usize, gens: usize) -> Self {
        Presentation { zp, d, gens, relations: Vec::new() }
    }

    /// Relations given by integer coefficient lists (lowest degree first), scalars in the group ring.
    pub fn from_int_rows(zp: Zp, d: usize, gens: usize, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let rels = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let f = Poly::new(c.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(0));
                        to_grpoly(&f, zp, d)
                    })
                    .collect()
            })
            .collect();
        Self::new(zp, d, gens, rels)
    }

    pub fn zp(&self) -> Zp {
        self.zp
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn num_gens(&self) -> usize {
        self.gens
    }
    pub fn relations(&self) -> &[Vec<GRPoly>] {
        &self.relations
    }

    fn proto(&self) -> GroupRingElt {
        GroupRingElt::zero(self.zp, self.d)
    }

    pub fn with_relation(mut self, row: Vec<GRPoly>) -> Result<Self> {
        if row.len() != self.gens {
            return Err(Error::InvalidParameter("relation length differs from the number of generators".into()));
        }
        self.relations.push(row);
        Ok(self)
    }

    pub fn direct_sum(&self, other: &Presentation) -> Result<Self> {
        if self.zp != other.zp || self.d != other.d {
            return Err(Error::InvalidParameter("direct sum over different rings".into()));
        }
        let zero = Poly::zero(&self.proto());
        let g = self.gens + other.gens;
        let mut rels = Vec::new();
        for r in &self.relations {
            let mut row = r.clone();
            row.resize(g, zero.clone());
            rels.push(row);
        }
        for r in &other.relations {
            let mut row = vec![zero.clone(); self.gens];
            row.extend(r.iter().cloned());
            rels.push(row);
        }
        Ok(Presentation { zp: self.zp, d: self.d, gens: g, relations: rels })
    }

    /// M / ω_n M: appends ω_n e_k for every generator.
    pub fn coinvariants(&self, n: u32) -> Self {
        let omega = to_grpoly(&omega_family(self.zp.p(), n).omega, self.zp, self.d);
        let zero = Poly::zero(&self.proto());
        let mut out = self.clone();
        for k in 0..self.gens {
            let mut row = vec![zero.clone(); self.gens];
            row[k] = omega.clone();
            out.relations.push(row);
        }
        out
    }

    /// The same module viewed over Z_p[X] (d = 1), with generators e_k F^j.
    pub fn to_lambda(&self) -> Presentation {
        let d = self.d;
        let z1 = GroupRingElt::zero(self.zp, 1);
        let g = self.gens * d;
        let mut rels = Vec::new();
        for row in &self.relations {
            for i in 0..d {
                let shift = GroupRingElt::f_pow(self.zp, d, i as i64);
                let mut out = vec![Poly::zero(&z1); g];
                for (k, entry) in row.iter().enumerate() {
                    for j in 0..d {
                        let coeffs: Vec<GroupRingElt> = entry
                            .coeffs()
                            .iter()
                            .map(|c| GroupRingElt::from_raw(self.zp, vec![(c.clone() * shift.clone()).coeffs()[j]]))
                            .collect();
                        out[k * d + j] = Poly::new(coeffs, z1.clone());
                    }
                }
                rels.push(out);
            }
        }
        Presentation { zp: self.zp, d: 1, gens: g, relations: rels }
    }

    fn max_degree(&self) -> usize {
        self.relations.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
    }
}

fn row_degree(row: &[GRPoly]) -> Option<usize> {
    row.iter().filter_map(Poly::degree).max()
}

type Dense = Vec<Vec<GroupRingElt>>;

fn to_dense(row: &[GRPoly], len: usize, proto: &GroupRingElt) -> Dense {
    row.iter()
        .map(|p| {
            let mut c = p.coeffs().to_vec();
            c.resize(len.max(c.len()), proto.clone());
            c
        })
        .collect()
}

/// Z_p-coordinates (k, t, i) ↦ k·len·d + t·d + i of a dense vector truncated at `len`.
fn flatten(v: &Dense, len: usize, d: usize, zp: Zp) -> Vec<u64> {
    let mut out = vec![0u64; v.len() * len * d];
    for (k, comp) in v.iter().enumerate() {
        for (t, c) in comp.iter().enumerate().take(len) {
            for (i, &x) in c.coeffs().iter().enumerate() {
                out[k * len * d + t * d + i] = x % zp.modulus();
            }
        }
    }
    out
}

/// Column indices giving a square submatrix invertible mod p, if the rows are independent mod p.
fn unit_pivots(m: &ZpMatrix) -> Option<Vec<usize>> {
    let p = m.ctx().p();
    let rows = m.rows();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut pivots = Vec::new();
    let f = Zp::new(p, 1).expect("prime");
    for j in 0..m.cols() {
        let mut v: Vec<u64> = (0..rows).map(|i| m.get(i, j) % p).collect();
        for (lead, b) in &basis {
            let c = v[*lead];
            if c != 0 {
                for i in 0..rows {
                    v[i] = f.sub_raw(v[i], f.mul_raw(c, b[i]));
                }
            }
        }
        if let Some(lead) = v.iter().position(|&x| x != 0) {
            let inv = f.inv_raw(v[lead]).expect("nonzero residue");
            let v: Vec<u64> = v.iter().map(|&x| f.mul_raw(x, inv)).collect();
            for (_, b) in basis.iter_mut() {
                let c = b[lead];
                if c != 0 {
                    for i in 0..rows {
                        b[i] = f.sub_raw(b[i], f.mul_raw(c, v[i]));
                    }
                }
            }
            basis.push((lead, v));
            pivots.push(j);
            if pivots.len() == rows {
                return Some(pivots);
            }
        }
    }
    None
}

/// Reduction data: X^B e_k ≡ l_k modulo the relations.
struct Reducer {
    b: usize,
    tails: Vec<Dense>,
    proto: GroupRingElt,
}

impl Reducer {
    fn reduce(&self, v: &mut Dense) {
        let g = v.len();
        let top = v.iter().map(Vec::len).max().unwrap_or(0);
        for t in (self.b..top).rev() {
            for k in 0..g {
                let c = match v[k].get(t) {
                    Some(c) if !c.is_zero() => c.clone(),
                    _ => continue,
                };
                v[k][t] = self.proto.clone();
                for (k2, tail) in self.tails[k].iter().enumerate() {
                    for (u, x) in tail.iter().enumerate() {
                        if !x.is_zero() {
                            v[k2][t - self.b + u] = v[k2][t - self.b + u].clone() + c.clone() * x.clone();
                        }
                    }
                }
            }
        }
        for comp in v.iter_mut() {
            comp.resize(self.b, self.proto.clone());
        }
    }

    fn times_x(&self, v: &Dense) -> Dense {
        let mut w: Dense = v
            .iter()
            .map(|c| {
                let mut s = vec![self.proto.clone()];
                s.extend(c.iter().cloned());
                s
            })
            .collect();
        self.reduce(&mut w);
        w
    }
}

fn try_reducer(m: &Presentation, b: usize) -> Option<Reducer> {
    let (g, d, zp) = (m.gens, m.d, m.zp);
    let proto = m.proto();
    let len = b + 1;
    let mut cols = Vec::new();
    for row in &m.relations {
        let Some(deg) = row_degree(row) else { continue };
        if deg > b {
            continue;
        }
        for j in 0..=(b - deg) {
            for i in 0..d {
                let f = GroupRingElt::f_pow(zp, d, i as i64);
                let mut v = vec![vec![proto.clone(); len]; g];
                for (k, p) in row.iter().enumerate() {
                    for (t, c) in p.coeffs().iter().enumerate() {
                        v[k][t + j] = c.clone() * f.clone();
                    }
                }
                cols.push(flatten(&v, len, d, zp));
            }
        }
    }
    if cols.is_empty() {
        return None;
    }
    let full = ZpMatrix::from_columns(zp, g * len * d, &cols);
    let top_rows: Vec<usize> = (0..g).flat_map(|k| (0..d).map(move |i| k * len * d + b * d + i)).collect();
    let top = full.select_rows(&top_rows);
    let piv = unit_pivots(&top)?;
    let inv = top.select_columns(&piv).inverse().ok()?;
    let chosen = full.select_columns(&piv);
    let mut tails = Vec::with_capacity(g);
    for k in 0..g {
        // Column of inv solving top·c = e_{(k, B, 0)}.
        let c = inv.column(k * d);
        let t = chosen.mul_vec(&c);
        let mut tail = vec![vec![proto.clone(); b]; g];
        for (k2, comp) in tail.iter_mut().enumerate() {
            for (u, slot) in comp.iter_mut().enumerate() {
                let coords: Vec<u64> = (0..d).map(|i| zp.neg_raw(t[k2 * len * d + u * d + i])).collect();
                *slot = GroupRingElt::from_raw(zp, coords);
            }
        }
        tails.push(tail);
    }
    Some(Reducer { b, tails, proto })
}

/// Z_p-rank and torsion of a module that is finitely generated over Z_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub rank: usize,
    /// Valuations of the nontrivial torsion elementary divisors, ascending.
    pub torsion: Vec<u32>,
    /// X-degree bound of the flattened model.
    pub degree_bound: usize,
    pub ambiguous: bool,
}

impl ModuleReport {
    /// Number of cyclic factors, free or torsion.
    pub fn total(&self) -> usize {
        self.rank + self.torsion.len()
    }
}

/// Flattens the presentation over Z_p and reads off rank and torsion by SNF.
pub fn module_report(m: &Presentation) -> Result<ModuleReport> {
    if m.gens == 0 {
        return Ok(ModuleReport { rank: 0, torsion: Vec::new(), degree_bound: 0, ambiguous: false });
    }
    let limit = 2 * m.max_degree() + 2;
    let red = (1..=limit).find_map(|b| try_reducer(m, b)).ok_or(Error::NotZpFinite(limit))?;
    let (g, d, zp, b) = (m.gens, m.d, m.zp, red.b);
    let mut cols = Vec::new();
    for row in &m.relations {
        let mut w = to_dense(row, b, &red.proto);
        red.reduce(&mut w);
        // Cayley–Hamilton over Z_p[G]: X-powers below g·B suffice.
        for _ in 0..g * b {
            for i in 0..d {
                let f = GroupRingElt::f_pow(zp, d, i as i64);
                let shifted: Dense = w.iter().map(|c| c.iter().map(|x| x.clone() * f.clone()).collect()).collect();
                cols.push(flatten(&shifted, b, d, zp));
            }
            w = red.times_x(&w);
        }
    }
    let dim = g * b * d;
    let mat = ZpMatrix::from_columns(zp, dim, &cols);
    let s = snf(&mat);
    let r = s.rank(DEFAULT_MARGIN);
    let torsion = s.torsion(DEFAULT_MARGIN);
    Ok(ModuleReport { rank: dim - r, torsion, degree_bound: b, ambiguous: !s.ambiguous(DEFAULT_MARGIN).is_empty() })
}

fn check_level(n: u32) -> Result<()> {
    if n > 8 {
        return Err(Error::InvalidParameter(format!("level {n} is beyond desk scale")));
    }
    Ok(())
}

/// The plus-part presentation at level n for the character χ = ω^chi.
pub fn present_plus(zp: Zp, d: usize, n: u32, chi: usize) -> Result<Presentation> {
    check_level(n)?;
    let fam = omega_family(zp.p(), n);
    if chi == 0 {
        let tilde = to_grpoly(&fam.tilde_plus, zp, d);
        let proto = GroupRingElt::zero(zp, d);
        let twist = Poly::constant(-phi_plus_phi_inv(zp, d));
        let x = Poly::x(&proto);
        Presentation::new(zp, d, 2, vec![vec![tilde, twist], vec![Poly::zero(&proto), x]])
    } else {
        Presentation::new(zp, d, 1, vec![vec![to_grpoly(&fam.plus, zp, d)]])
    }
}

/// The minus-part presentation at level n for the character χ = ω^chi.
pub fn present_minus(zp: Zp, d: usize, n: u32, chi: usize) -> Result<Presentation> {
    check_level(n)?;
    let fam = omega_family(zp.p(), n);
    let f = if chi == 0 { &fam.minus } else { &fam.tilde_minus };
    Presentation::new(zp, d, 1, vec![vec![to_grpoly(f, zp, d)]])
}

pub fn present(zp: Zp, d: usize, n: u32, chi: usize, sign: crate::lattice_lab::Sign) -> Result<Presentation> {
    match sign {
        crate::lattice_lab::Sign::Plus => present_plus(zp, d, n, chi),
        crate::lattice_lab::Sign::Minus => present_minus(zp, d, n, chi),
    }
}

/// Torsion of the plus coinvariants at level n seen from level m (χ trivial):
/// exponent #{k even : n < k ≤ m}, repeated d·q_n^- + δ times.
pub fn coinvariant_torsion_closed_form(p: u64, d: usize, m: u32, n: u32) -> Vec<u32> {
    let e = (n + 1..=m).filter(|k| k % 2 == 0).count() as u32;
    if e == 0 {
        return Vec::new();
    }
    let count = d * q_values(p, n as i64).expect("n ≥ 0").minus as usize + delta_of(d, 0);
    vec![e; count]
}

/// Finite-level surrogate of the rank of the Γ_n-coinvariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankLawReport {
    pub n: u32,
    pub chi: usize,
    pub sign: crate::lattice_lab::Sign,
    /// (m, Z_p-rank, number of torsion factors) for m = n + 2, n + 4.
    pub levels: Vec<(u32, usize, usize)>,
    pub expected_torsion_count: usize,
    pub expected_total: usize,
}

impl RankLawReport {
    pub fn totals(&self) -> Vec<usize> {
        self.levels.iter().map(|&(_, r, t)| r + t).collect()
    }

    pub fn pass(&self) -> bool {
        self.levels
            .iter()
            .all(|&(_, r, t)| r + t == self.expected_total && t == self.expected_torsion_count)
    }
}

/// Expected torsion count of the coinvariants: d q_n^- + δ (plus), d(q_n^+ - 1) or d q_n^+ (minus).
pub fn expected_torsion_count(p: u64, d: usize, n: u32, chi: usize, sign: crate::lattice_lab::Sign) -> usize {
    let q = q_values(p, n as i64).expect("n ≥ 0");
    match sign {
        crate::lattice_lab::Sign::Plus => d * q.minus as usize + delta_of(d, chi),
        crate::lattice_lab::Sign::Minus if chi == 0 => d * (q.plus as usize - 1),
        crate::lattice_lab::Sign::Minus => d * q.plus as usize,
    }
}

/// d p^n + δ for the plus part, d p^n for the minus part.
pub fn expected_coinvariant_rank(p: u64, d: usize, n: u32, chi: usize, sign: crate::lattice_lab::Sign) -> usize {
    let base = d * (p as usize).pow(n);
    match sign {
        crate::lattice_lab::Sign::Plus => base + delta_of(d, chi),
        crate::lattice_lab::Sign::Minus => base,
    }
}

pub fn coinvariant_rank_law(zp: Zp, d: usize, n: u32, chi: usize, sign: crate::lattice_lab::Sign) -> Result<RankLawReport> {
    let mut levels = Vec::new();
    for m in [n + 2, n + 4] {
        let r = module_report(&present(zp, d, m, chi, sign)?.coinvariants(n))?;
        if r.ambiguous {
            return Err(Error::PrecisionExhausted(format!("coinvariants at m={m}, n={n}")));
        }
        levels.push((m, r.rank, r.torsion.len()));
    }
    Ok(RankLawReport {
        n,
        chi,
        sign,
        levels,
        expected_torsion_count: expected_torsion_count(zp.p(), d, n, chi, sign),
        expected_total: expected_coinvariant_rank(zp.p(), d, n, chi, sign),
    })
}

fn eval_poly(p: &GRPoly, x: u64, zp: Zp) -> u64 {
    p.coeffs().iter().rev().fold(0, |acc, c| zp.add_raw(zp.mul_raw(acc, x), c.coeffs()[0]))
}

/// Relation matrix at X = x, generators as rows and relations as columns.
fn relation_matrix_at(m: &Presentation, x: u64) -> ZpMatrix {
    let mut a = ZpMatrix::zeros(m.zp, m.gens, m.relations.len());
    for (s, row) in m.relations.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            a.set(k, s, eval_poly(p, x, m.zp));
        }
    }
    a
}

fn lambda_view(m: &Presentation) -> Presentation {
    if m.d == 1 {
        m.clone()
    } else {
        m.to_lambda()
    }
}

/// Λ-rank: number of generators minus the generic rank of the relation matrix.
pub fn lambda_rank(m: &Presentation) -> usize {
    let m = lambda_view(m);
    if m.relations.is_empty() {
        return m.gens;
    }
    let zp = m.zp;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let generic = (0..3)
        .map(|_| {
            let x = zp.mul_raw(zp.p(), rng.gen_range(0..zp.modulus()));
            snf(&relation_matrix_at(&m, x)).rank(DEFAULT_MARGIN)
        })
        .max()
        .unwrap_or(0);
    m.gens - generic
}

/// Constant terms of the syzygies of the relation rows, truncated at X^S.
fn syzygy_constants(m: &Presentation, s_len: usize) -> ZpMatrix {
    let (g, r, zp) = (m.gens, m.relations.len(), m.zp);
    let mut a = ZpMatrix::zeros(zp, g * s_len, r * s_len);
    for (s, row) in m.relations.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            for (t, c) in p.coeffs().iter().enumerate() {
                for j in 0..s_len {
                    if t + j < s_len {
                        a.set(k * s_len + t + j, s * s_len + j, c.coeffs()[0]);
                    }
                }
            }
        }
    }
    let k = kernel(&a, DEFAULT_MARGIN);
    let rows: Vec<usize> = (0..r).map(|s| s * s_len).collect();
    k.select_rows(&rows)
}

fn snf_signature(s: &SnfResult) -> (usize, Vec<u32>) {
    (s.rank(DEFAULT_MARGIN), s.torsion(DEFAULT_MARGIN))
}

/// SNF data of P0, the constant terms of all syzygies, stabilized in the truncation degree.
fn stable_syzygy_constants(m: &Presentation) -> Result<SnfResult> {
    let base = m.max_degree() + 2;
    let mut prev: Option<SnfResult> = None;
    for s_len in (base..base + 40).step_by(4) {
        let cur = snf(&syzygy_constants(m, s_len));
        if let Some(p) = &prev {
            if snf_signature(p) == snf_signature(&cur) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
    }
    Err(Error::PrecisionExhausted("syzygy constants did not stabilize".into()))
}

/// Invariants and coinvariants under Γ, with the two structural verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub is_free: bool,
    pub no_finite_submodule: bool,
    pub coinvariant_rank: usize,
    pub coinvariant_torsion: Vec<u32>,
    pub invariant_rank: usize,
    pub invariant_torsion: Vec<u32>,
}

/// M_Γ = coker ρ(0); M^Γ = Tor_1(Λ/X, M) = ker ρ(0) / (syzygies at 0).
pub fn freeness_test(m: &Presentation) -> Result<FreenessVerdict> {
    let m = lambda_view(m);
    let g = m.gens;
    let r = m.relations.len();
    let a0 = relation_matrix_at(&m, 0);
    let s0 = snf(&a0);
    let rank0 = if r == 0 { 0 } else { s0.rank(DEFAULT_MARGIN) };
    let coinvariant_torsion = if r == 0 { Vec::new() } else { s0.torsion(DEFAULT_MARGIN) };
    let coinvariant_rank = g - rank0;
    let (invariant_rank, invariant_torsion) = if r == 0 {
        (0, Vec::new())
    } else {
        let p0 = stable_syzygy_constants(&m)?;
        let k0 = r - rank0;
        (k0 - p0.rank(DEFAULT_MARGIN), p0.torsion(DEFAULT_MARGIN))
    };
    let no_finite_submodule = invariant_torsion.is_empty();
    let is_free = invariant_rank == 0 && no_finite_submodule && coinvariant_torsion.is_empty();
    Ok(FreenessVerdict { is_free, no_finite_submodule, coinvariant_rank, coinvariant_torsion, invariant_rank, invariant_torsion })
}

/// The kernel of the presentation map Λ^g → M, as the module N/XN = Z_p^r / P0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub free: bool,
    pub rank: usize,
    pub expected_rank: usize,
}

pub fn presentation_kernel(m: &Presentation) -> Result<KernelReport> {
    let m = lambda_view(m);
    let r = m.relations.len();
    let expected_rank = m.gens - lambda_rank(&m);
    if r == 0 {
        return Ok(KernelReport { free: true, rank: 0, expected_rank });
    }
    let p0 = stable_syzygy_constants(&m)?;
    Ok(KernelReport { free: p0.torsion(DEFAULT_MARGIN).is_empty(), rank: r - p0.rank(DEFAULT_MARGIN), expected_rank })
}

/// Outcome of a randomized property campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub instances: usize,
    pub skipped: usize,
    pub counterexamples: Vec<String>,
}

impl PropertyReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn random_poly(rng: &mut ChaCha8Rng, zp: Zp, max_deg: usize) -> GRPoly {
    let deg = rng.gen_range(0..=max_deg);
    let p = zp.p() as i64;
    let palette = [0, 0, 0, 1, -1, 2, -2, p, -p, 1 + p, p * p];
    let coeffs: Vec<GroupRingElt> =
        (0..=deg).map(|_| GroupRingElt::from_i64s(zp, &[palette[rng.gen_range(0..palette.len())]])).collect();
    Poly::new(coeffs, GroupRingElt::zero(zp, 1))
}

fn random_lambda_module(rng: &mut ChaCha8Rng, zp: Zp, max_deg: usize) -> Presentation {
    let g = rng.gen_range(1..=3);
    let r = rng.gen_range(0..=g + 1);
    let rels = (0..r).map(|_| (0..g).map(|_| random_poly(rng, zp, max_deg)).collect()).collect();
    Presentation { zp, d: 1, gens: g, relations: rels }
}

/// Surjections Λ^g ↠ N with N free of finite submodules have free kernel of rank g - rank N.
pub fn kernel_freeness_property(zp: Zp, trials: usize, max_deg: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PropertyReport { instances: 0, skipped: 0, counterexamples: Vec::new() };
    while report.instances < trials {
        let n = random_lambda_module(&mut rng, zp, max_deg);
        if !freeness_test(&n)?.no_finite_submodule {
            report.skipped += 1;
            continue;
        }
        report.instances += 1;
        let k = presentation_kernel(&n)?;
        if !k.free || k.rank != k.expected_rank {
            report.counterexamples.push(format!("{k:?}\n{n:?}"));
        }
    }
    Ok(report)
}

/// Injections Λ^s ↪ N with N free of finite submodules have cokernel free of finite submodules.
pub fn greenberg_property(zp: Zp, trials: usize, max_deg: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PropertyReport { instances: 0, skipped: 0, counterexamples: Vec::new() };
    while report.instances < trials {
        let n = random_lambda_module(&mut rng, zp, max_deg);
        if !freeness_test(&n)?.no_finite_submodule {
            report.skipped += 1;
            continue;
        }
        let s = rng.gen_range(1..=2);
        let mut coker = n.clone();
        for _ in 0..s {
            let v = (0..n.gens).map(|_| random_poly(&mut rng, zp, max_deg)).collect();
            coker = coker.with_relation(v)?;
        }
        if lambda_rank(&n) != lambda_rank(&coker) + s {
            report.skipped += 1;
            continue;
        }
        report.instances += 1;
        let v = freeness_test(&coker)?;
        if !v.no_finite_submodule {
            report.counterexamples.push(format!("{v:?}\n{coker:?}"));
        }
    }
    Ok(report)
}

/// Consistency of the candidate Λ^d ⊕ (Λ/X)^δ with the finite-level observables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupplementaryReport {
    pub d: usize,
    pub chi: usize,
    pub sign: crate::lattice_lab::Sign,
    pub delta: usize,
    /// (n, candidate coinvariant rank, observed total) for n = 0, 1, 2.
    pub levels: Vec<(u32, usize, usize)>,
    pub candidate_x_torsion: usize,
    /// Rank of Λ^d ⊕ Λ/(X² + 3X + 3) at n = 0, when p = 3 and δ = 2.
    pub rival_rank_n0: Option<usize>,
}

impl SupplementaryReport {
    pub fn consistent(&self) -> bool {
        self.levels.iter().all(|&(_, c, o)| c == o) && self.candidate_x_torsion == self.delta
    }

    /// The rival is distinguished at n = 0 whenever it is defined.
    pub fn rival_rejected(&self) -> bool {
        match self.rival_rank_n0 {
            Some(r) => self.levels.first().is_some_and(|&(_, _, o)| o != r),
            None => true,
        }
    }
}

fn candidate(zp: Zp, d: usize, delta: usize) -> Result<Presentation> {
    let mut rows = Vec::new();
    for j in 0..delta {
        let mut row = vec![vec![0]; d + delta];
        row[d + j] = vec![0, 1];
        rows.push(row);
    }
    Presentation::from_int_rows(zp, 1, d + delta, &rows)
}

pub fn supplementary_structure_check(zp: Zp, d: usize, chi: usize, sign: crate::lattice_lab::Sign) -> Result<SupplementaryReport> {
    let delta = match sign {
        crate::lattice_lab::Sign::Plus => delta_of(d, chi),
        crate::lattice_lab::Sign::Minus => 0,
    };
    let cand = candidate(zp, d, delta)?;
    let mut levels = Vec::new();
    for n in 0..=2 {
        let c = module_report(&cand.coinvariants(n))?;
        let law = coinvariant_rank_law(zp, d, n, chi, sign)?;
        let observed = law.totals().into_iter().max().unwrap_or(0);
        levels.push((n, c.total(), observed));
    }
    let inv = freeness_test(&cand)?;
    let rival_rank_n0 = if zp.p() == 3 && delta == 2 {
        let mut rows = vec![vec![vec![0]; d + 1]];
        rows[0][d] = vec![3, 3, 1];
        let rival = Presentation::from_int_rows(zp, 1, d + 1, &rows)?;
        Some(module_report(&rival.coinvariants(0))?.total())
    } else {
        None
    };
    Ok(SupplementaryReport { d, chi, sign, delta, levels, candidate_x_torsion: inv.invariant_rank, rival_rank_n0 })
}
