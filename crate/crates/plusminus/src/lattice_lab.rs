//! Galois-span lattices of the local points in log coordinates, and the rank,
//! exact-sequence, cyclicity and generation checks built on them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal::local_point_log;
use crate::group_ring::{idempotents, q_values, CharIdempotent};
use crate::linalg::{Lattice, ZpMatrix};
use crate::padic::UnramifiedElt;
use crate::tower::{maximal_ideal_lattice, pi_n, TowerDesc, TowerElt};

/// Applies ε_χ = Σ c_a σ_a to an element of k_n.
pub fn apply_idempotent(x: &TowerElt, chi: &CharIdempotent) -> Result<TowerElt> {
    let tower = x.tower();
    let n = x.level();
    let mut acc = TowerElt::zero(tower, n).with_abs_prec(x.abs_prec());
    for (a, c) in chi.terms() {
        let u = tower.delta_lift(a, n);
        let c = UnramifiedElt::scalar(tower.field(), tower.zp().elem(c));
        acc = acc + x.galois_act(u, 0)?.scale_base(&c);
    }
    Ok(acc)
}

fn lattice_of(tower: &Arc<TowerDesc>, n: i64, elts: &[TowerElt]) -> Lattice {
    let den = elts.iter().map(TowerElt::den_exp).max().unwrap_or(0);
    let reliable = elts.iter().map(|e| e.scaled_reliable(den)).min().unwrap_or(tower.prec() as i64);
    let cols: Vec<Vec<u64>> = elts.iter().map(|e| e.to_scaled_vector(den)).collect();
    let m = ZpMatrix::from_columns(tower.zp(), tower.ambient_dim(n), &cols);
    Lattice::new(m, den).with_reliable(reliable.max(0) as u32)
}

/// Z_p-lattice spanned by ε_χ σ x for σ ∈ G_n and x in `gens`, all viewed in k_n.
pub fn galois_span(gens: &[TowerElt], n: i64, chi: Option<&CharIdempotent>) -> Result<Lattice> {
    let tower = match gens.first() {
        Some(g) => Arc::clone(g.tower()),
        None => return Err(Error::InvalidParameter("galois_span needs at least one generator".into())),
    };
    tower.check_level(n)?;
    let mut elts = Vec::new();
    for g in gens {
        if g.level() > n {
            return Err(Error::InvalidParameter(format!("generator at level {} above {n}", g.level())));
        }
        let x = match chi {
            Some(c) => apply_idempotent(&g.lift_to(n), c)?,
            None => g.lift_to(n),
        };
        for f in 0..tower.d() as i64 {
            for u in tower.cyclotomic_units(n) {
                elts.push(x.galois_act(u, f)?);
            }
        }
    }
    Ok(lattice_of(&tower, n, &elts))
}

fn log_point(tower: &Arc<TowerDesc>, n: i64) -> Result<TowerElt> {
    Ok(local_point_log(tower, n)?.log_value)
}

/// 𝒞(𝔪_m) = ⟨d_m, d_{-1}⟩, as a lattice inside k_n (m ≤ n).
pub fn norm_c(tower: &Arc<TowerDesc>, m: i64, n: i64, chi: Option<&CharIdempotent>) -> Result<Lattice> {
    let mut gens = vec![log_point(tower, -1)?];
    if m >= 0 {
        gens.push(log_point(tower, m)?);
    }
    galois_span(&gens, n, chi)
}

/// Ê(𝔪_n) = ⟨d_n, d_{n-1}⟩.
pub fn full_points(tower: &Arc<TowerDesc>, n: i64, chi: Option<&CharIdempotent>) -> Result<Lattice> {
    let mut gens = vec![log_point(tower, n)?];
    if n >= 0 {
        gens.push(log_point(tower, n - 1)?);
    }
    galois_span(&gens, n, chi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Ê^±(𝔪_n): 𝒞(𝔪_n) when the parity of n matches the sign, 𝒞(𝔪_{n-1}) otherwise.
pub fn norm_subgroup(tower: &Arc<TowerDesc>, n: i64, sign: Sign, chi: Option<&CharIdempotent>) -> Result<Lattice> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("norm subgroup at level {n}")));
    }
    let even = n % 2 == 0;
    let m = if even == (sign == Sign::Plus) { n } else { n - 1 };
    norm_c(tower, m, n, chi)
}

/// Lattices are ranked at the tower's precision and rerun four digits higher when ambiguous.
fn stable_rank<F>(tower: &Arc<TowerDesc>, build: F) -> Result<usize>
where
    F: Fn(&Arc<TowerDesc>) -> Result<Lattice>,
{
    let l = build(tower)?;
    if !l.is_ambiguous() {
        return Ok(l.rank());
    }
    let finer = TowerDesc::new(tower.p(), tower.d(), tower.prec() + 4, tower.n_max())?;
    let l2 = build(&finer)?;
    if l2.rank() != l.rank() {
        return Err(Error::PrecisionExhausted(format!(
            "rank unstable between N={} and N={}",
            tower.prec(),
            finer.prec()
        )));
    }
    Ok(l2.rank())
}

fn chi_at(tower: &TowerDesc, j: Option<usize>) -> Result<Option<CharIdempotent>> {
    match j {
        None => Ok(None),
        Some(j) => {
            let all = idempotents(tower.zp())?;
            all.into_iter().nth(j).map(Some).ok_or_else(|| Error::InvalidParameter(format!("character index {j}")))
        }
    }
}

/// Measured and expected ranks of 𝒞(𝔪_n)^χ and Ê^±(𝔪_n)^χ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub p: u64,
    pub d: usize,
    pub n: i64,
    pub chi: usize,
    pub c_rank: usize,
    pub c_expected: usize,
    pub plus_rank: Option<usize>,
    pub plus_expected: Option<usize>,
    pub minus_rank: Option<usize>,
    pub minus_expected: Option<usize>,
}

impl RankRow {
    pub fn pass(&self) -> bool {
        self.c_rank == self.c_expected && self.plus_rank == self.plus_expected && self.minus_rank == self.minus_expected
    }
}

/// Closed-form rank of 𝒞(𝔪_n)^χ.
pub fn expected_c_rank(p: u64, d: usize, n: i64, chi: usize) -> usize {
    let trivial = chi == 0;
    if n < 0 {
        return if trivial { d } else { 0 };
    }
    let q = q_values(p, n).expect("n ≥ 0").q as usize;
    if n % 2 == 1 && trivial {
        d * (q + 1)
    } else {
        d * q
    }
}

/// Closed-form rank of Ê^±(𝔪_n)^χ.
pub fn expected_pm_rank(p: u64, d: usize, n: i64, chi: usize, sign: Sign) -> usize {
    let qv = q_values(p, n).expect("n ≥ 0");
    match sign {
        Sign::Plus => d * qv.plus as usize,
        Sign::Minus => d * qv.minus as usize + if chi == 0 { d } else { 0 },
    }
}

pub fn rank_row(tower: &Arc<TowerDesc>, n: i64, chi: usize) -> Result<RankRow> {
    let (p, d) = (tower.p(), tower.d());
    let c_rank = stable_rank(tower, |t| {
        let e = chi_at(t, Some(chi))?;
        norm_c(t, n, n, e.as_ref())
    })?;
    let (mut plus_rank, mut plus_expected, mut minus_rank, mut minus_expected) = (None, None, None, None);
    if n >= 0 {
        for sign in [Sign::Plus, Sign::Minus] {
            let r = stable_rank(tower, |t| {
                let e = chi_at(t, Some(chi))?;
                norm_subgroup(t, n, sign, e.as_ref())
            })?;
            let x = expected_pm_rank(p, d, n, chi, sign);
            match sign {
                Sign::Plus => (plus_rank, plus_expected) = (Some(r), Some(x)),
                Sign::Minus => (minus_rank, minus_expected) = (Some(r), Some(x)),
            }
        }
    }
    Ok(RankRow { p, d, n, chi, c_rank, c_expected: expected_c_rank(p, d, n, chi), plus_rank, plus_expected, minus_rank, minus_expected })
}

/// 0 → Ê(𝔪_{-1}) → 𝒞(𝔪_n) ⊕ 𝒞(𝔪_{n-1}) → Ê(𝔪_n) → 0, checked on ranks and lattices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceReport {
    pub n: i64,
    pub chi: Option<usize>,
    pub rank_c_n: usize,
    pub rank_c_prev: usize,
    pub rank_sum: usize,
    pub rank_intersection: usize,
    pub expected_intersection: usize,
    pub intersection_is_base: bool,
    pub sum_is_full: bool,
}

impl ExactSequenceReport {
    pub fn additive(&self) -> bool {
        self.rank_sum + self.rank_intersection == self.rank_c_n + self.rank_c_prev
    }

    pub fn pass(&self) -> bool {
        self.additive()
            && self.intersection_is_base
            && self.sum_is_full
            && self.rank_intersection == self.expected_intersection
    }
}

pub fn check_exact_sequence(tower: &Arc<TowerDesc>, n: i64, chi: Option<usize>) -> Result<ExactSequenceReport> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("exact sequence at level {n}")));
    }
    let e = chi_at(tower, chi)?;
    let e = e.as_ref();
    let cn = norm_c(tower, n, n, e)?;
    let cp = norm_c(tower, n - 1, n, e)?;
    let sum = cn.sum(&cp);
    let inter = cn.intersect(&cp);
    let base = galois_span(&[log_point(tower, -1)?], n, e)?;
    let full = full_points(tower, n, e)?;
    let trivial = chi.is_none_or(|j| j == 0);
    Ok(ExactSequenceReport {
        n,
        chi,
        rank_c_n: cn.rank(),
        rank_c_prev: cp.rank(),
        rank_sum: sum.rank(),
        rank_intersection: inter.rank(),
        expected_intersection: if trivial { tower.d() } else { 0 },
        intersection_is_base: inter.equals(&base),
        sum_is_full: sum.equals(&full),
    })
}

/// Whether d_{-1} lies in ⟨d_n⟩_{Z_p[G_n]}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub d: usize,
    pub n: i64,
    pub cyclic: bool,
    pub expected_cyclic: bool,
}

impl CyclicityReport {
    pub fn pass(&self) -> bool {
        self.cyclic == self.expected_cyclic
    }
}

/// The dichotomy: 𝒞(𝔪_n) fails to be generated by d_n exactly when 4 | d and n is even.
pub fn expected_cyclic(d: usize, n: i64) -> bool {
    !(d % 4 == 0 && n % 2 == 0)
}

pub fn cyclicity_check(tower: &Arc<TowerDesc>, n: i64) -> Result<CyclicityReport> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("cyclicity at level {n}")));
    }
    let span = galois_span(&[log_point(tower, n)?], n, None)?;
    let base = lattice_of(tower, n, &[log_point(tower, -1)?.lift_to(n)]);
    let aligned_den = span.den_exp().max(base.den_exp());
    let (span, base) = (span.rescale(aligned_den), base.rescale(aligned_den));
    let mem = span.contains_columns(base.gens());
    if mem.ambiguous {
        return Err(Error::PrecisionExhausted(format!("membership of d_-1 at level {n} decided within the margin")));
    }
    Ok(CyclicityReport { d: tower.d(), n, cyclic: mem.members[0], expected_cyclic: expected_cyclic(tower.d(), n) })
}

/// Row indices of the coordinates η^j, p ∤ j (j ≥ 1 when n = 0): a complement of k_{n-1} in k_n.
pub fn new_coordinates(tower: &TowerDesc, n: i64) -> Vec<usize> {
    let d = tower.d();
    let p = tower.p() as usize;
    (0..tower.level_dim(n))
        .filter(|&j| if n == 0 { j != 0 } else { j % p != 0 })
        .flat_map(|j| (0..d).map(move |i| j * d + i))
        .collect()
}

/// Embeds a lattice in k_m coordinates into k_n coordinates, m ≤ n.
pub fn lift_lattice(tower: &TowerDesc, l: &Lattice, m: i64, n: i64) -> Lattice {
    let d = tower.d();
    let step = if m < 0 { 0 } else { (tower.p() as usize).pow((n - m) as u32) };
    let mut g = ZpMatrix::zeros(l.ctx(), tower.ambient_dim(n), l.num_generators());
    for c in 0..l.num_generators() {
        for j in 0..tower.level_dim(m) {
            for i in 0..d {
                g.set(j * step * d + i, c, l.gens().get(j * d + i, c));
            }
        }
    }
    Lattice::new(g, l.den_exp()).with_reliable(l.reliable()).with_margin(l.margin())
}

/// ⟨π_n⟩_{Z_p[G_n]} + 𝔪_{n-1} = 𝔪_n, and the same quotient generated by d_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub n: i64,
    pub uniformizer_generates: bool,
    pub point_generates: bool,
}

impl GenerationReport {
    pub fn pass(&self) -> bool {
        self.uniformizer_generates && self.point_generates
    }
}

pub fn generation_check(tower: &Arc<TowerDesc>, n: i64) -> Result<GenerationReport> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("generation at level {n}")));
    }
    let m_n = maximal_ideal_lattice(tower, n)?;
    let m_prev = lift_lattice(tower, &maximal_ideal_lattice(tower, n - 1)?, n - 1, n);
    let pi_span = galois_span(&[pi_n(tower, n)?], n, None)?;
    let uniformizer_generates = pi_span.sum(&m_prev).equals(&m_n);

    let rows = new_coordinates(tower, n);
    let d_span = galois_span(&[log_point(tower, n)?], n, None)?.project(&rows);
    let point_generates = d_span.equals(&m_n.project(&rows));
    Ok(GenerationReport { n, uniformizer_generates, point_generates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_level_spans() {
        let t = TowerDesc::new(3, 2, 10, 1).unwrap();
        let l = log_point(&t, -1).unwrap();
        assert_eq!(galois_span(&[l.clone()], -1, None).unwrap().rank(), 2);
        let chis = idempotents(t.zp()).unwrap();
        assert_eq!(galois_span(&[l], -1, Some(&chis[1])).unwrap().rank(), 0);
    }

    #[test]
    fn norm_subgroup_odd_level_drops() {
        let t = TowerDesc::new(3, 2, 10, 1).unwrap();
        let a = norm_subgroup(&t, 1, Sign::Plus, None).unwrap();
        let b = lift_lattice(&t, &norm_subgroup(&t, 0, Sign::Plus, None).unwrap(), 0, 1);
        assert!(a.equals(&b));
    }

    #[test]
    fn cyclicity_examples() {
        for (d, n, expect) in [(2, 2, true), (4, 2, false), (4, 1, true)] {
            let t = TowerDesc::new(3, d, 10, n).unwrap();
            let r = cyclicity_check(&t, n).unwrap();
            assert_eq!(r.cyclic, expect, "d={d} n={n}");
        }
    }
}
