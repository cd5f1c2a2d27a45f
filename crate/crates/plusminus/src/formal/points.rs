use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::curve::{bigint_valuation, CurveParams};
use super::fgl::{formal_exp, formal_group_law, formal_log, multiplication_series};
use super::honda::{epsilon_n, honda_log, integer_to_tower, rational_series_to_k, KSeries};
use crate::error::{Error, Result};
use crate::padic::UnramifiedElt;
use crate::series::TruncSeries;
use crate::tower::{pi_n, PrecisionCheck, TowerDesc, TowerElt};

/// The point d_n, recorded through log_Ê(d_n) and optionally its formal-group parameter.
#[derive(Clone, Debug)]
pub struct LocalPoint {
    pub level: i64,
    pub log_value: TowerElt,
    pub param_value: Option<TowerElt>,
    /// Precision to which `log_value` is guaranteed.
    pub effective_precision: i64,
}

/// log_Ê(d_n) = ε_n + Σ_{m=0}^{⌊(n+1)/2⌋} (-1)^m π_{n-2m}/p^m.
pub fn local_point_log(tower: &Arc<TowerDesc>, n: i64) -> Result<LocalPoint> {
    tower.check_level(n)?;
    if n < -1 {
        return Err(Error::InvalidParameter(format!("local point at level {n}")));
    }
    let mut acc = TowerElt::from_base(tower, n, &epsilon_n(tower, n));
    for m in 0..=(n + 1) / 2 {
        let term = pi_n(tower, n - 2 * m)?.div_p_pow(m as u32).lift_to(n);
        acc = if m % 2 == 0 { acc + term } else { acc - term };
    }
    let effective_precision = acc.abs_prec();
    Ok(LocalPoint { level: n, log_value: acc, param_value: None, effective_precision })
}

/// One checked relation: which one, the level, and the residual data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: u8,
    pub n: i64,
    pub check: PrecisionCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub checks: Vec<RelationCheck>,
}

impl TraceReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.check.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.check.pass)
    }
}

/// Tr_{n/n-1} log d_n + log d_{n-2} = 0 for 1 ≤ n ≤ n_max, and
/// Tr_{0/-1} log d_0 + (φ + φ^{-1}) log d_{-1} = 0.
pub fn verify_trace_relations(tower: &Arc<TowerDesc>, n_max: i64) -> Result<TraceReport> {
    tower.check_level(n_max)?;
    let prec = tower.prec() as i64;
    let logs = (-1..=n_max.max(0)).map(|n| local_point_log(tower, n).map(|l| l.log_value)).collect::<Result<Vec<_>>>()?;
    let at = |n: i64| &logs[(n + 1) as usize];
    let mut checks = Vec::new();
    if n_max >= 0 {
        let l = at(-1);
        let twisted = l.galois_act(1, 1)? + l.galois_act(1, -1)?;
        let residual = at(0).trace(-1)? + twisted;
        checks.push(RelationCheck { relation: 2, n: 0, check: PrecisionCheck::from_residual(&residual, prec) });
    }
    for n in 1..=n_max {
        let residual = at(n).trace(n - 1)? + at(n - 2).lift_to(n - 1);
        let floor = prec - (n + 1) / 2;
        checks.push(RelationCheck { relation: 1, n, check: PrecisionCheck::from_residual(&residual, floor) });
    }
    Ok(TraceReport { checks })
}

/// log d_n - π_n lies in k_{n-1}.
pub fn log_congruence_check(tower: &Arc<TowerDesc>, n: i64) -> Result<bool> {
    if n < 0 {
        return Ok(true);
    }
    let diff = local_point_log(tower, n)?.log_value - pi_n(tower, n)?;
    Ok(diff.descend_to(n - 1).is_ok())
}

fn base_inverse(x: &TowerElt) -> Result<TowerElt> {
    if x.den_exp() > 0 || x.valuation() != Some(0) {
        return Err(Error::NotUnit(format!("{x:?}")));
    }
    let inv = x.coords()[0].inverse()?;
    Ok(TowerElt::from_base(x.tower(), -1, &inv).with_abs_prec(x.abs_prec()))
}

/// H = exp_Ê ∘ log_{𝒢_n} over O_k through degree `deg`, with its compositional inverse.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub forward: KSeries,
    pub backward: KSeries,
}

impl Comparison {
    /// Largest denominator exponent among the coefficients of both series.
    pub fn max_den_exp(&self) -> u32 {
        self.forward.coeffs().iter().chain(self.backward.coeffs()).map(TowerElt::den_exp).max().unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.max_den_exp() == 0
    }

    pub fn min_precision(&self) -> i64 {
        self.forward.coeffs().iter().chain(self.backward.coeffs()).map(TowerElt::abs_prec).min().unwrap_or(0)
    }
}

pub fn comparison_series(e: &CurveParams, tower: &Arc<TowerDesc>, n: i64, deg: usize) -> Result<Comparison> {
    check_curve(e, tower)?;
    let f = honda_log(tower, n, deg)?;
    let exp = rational_series_to_k(tower, &formal_exp(e, deg));
    let forward = exp.compose(&f);
    let c1_inv = base_inverse(forward.coeff(1))?;
    let backward = forward.reversion_with(&c1_inv);
    Ok(Comparison { forward, backward })
}

fn check_curve(e: &CurveParams, tower: &TowerDesc) -> Result<()> {
    if e.p != tower.p() {
        return Err(Error::InvalidParameter(format!("curve at p={} but tower at p={}", e.p, tower.p())));
    }
    Ok(())
}

/// ⌊x·v⌋ with v = 1/((p-1)p^n), the guaranteed coordinate valuation of an element of 𝔪_n^x.
fn ideal_floor(tower: &TowerDesc, n: i64, x: usize) -> i64 {
    if n < 0 {
        x as i64
    } else {
        (x / tower.level_dim(n)) as i64
    }
}

/// Lower bound for the tail Σ_{j>D} c_j x^j of a series with v_p(c_j) ≥ -v_p(j), x ∈ 𝔪_n.
fn log_tail_floor(tower: &TowerDesc, n: i64, deg: usize) -> i64 {
    let p = tower.p();
    let cap = tower.prec() as i64;
    let mut best = i64::MAX;
    let mut j = deg + 1;
    loop {
        let v = ideal_floor(tower, n, j) - bigint_valuation(&BigInt::from(j), p) as i64;
        best = best.min(v);
        if ideal_floor(tower, n, j) - (j as f64).log(p as f64).floor() as i64 > cap.max(best) {
            break;
        }
        j += 1;
    }
    best
}

/// d_n through series evaluation: solve log_{𝒢_n}(t) = ε_n, add π_n in 𝒢_n via H, take log_Ê.
///
/// Only n ≤ 1 is supported. `target` is the precision the caller needs; the
/// achieved precision is reported in the returned point.
pub fn local_point_direct(e: &CurveParams, tower: &Arc<TowerDesc>, n: i64, deg: usize, target: i64) -> Result<LocalPoint> {
    check_curve(e, tower)?;
    tower.check_level(n)?;
    if !(-1..=1).contains(&n) {
        return Err(Error::InvalidParameter(format!("direct evaluation supports n ≤ 1, got {n}")));
    }
    let f = honda_log(tower, n, deg)?;
    let df = f.derivative();
    let eps = TowerElt::from_base(tower, -1, &epsilon_n(tower, n));

    // Newton on log_{𝒢_n}(t) = ε_n inside 𝔪_k.
    let mut t = eps.clone() * base_inverse(f.coeff(1))?;
    for _ in 0..2 * tower.prec() {
        let r = f.eval(&t) - eps.clone();
        if r.is_zero() {
            break;
        }
        let step = r * base_inverse(&df.eval(&t))?;
        t = t - step;
    }
    let solved = f.eval(&t) - eps.clone();
    let newton_prec = solved.residual_valuation();

    let cmp = comparison_series(e, tower, n, deg)?;
    if !cmp.is_integral() {
        return Err(Error::Internal("exp_Ê ∘ log_𝒢 is not integral".into()));
    }
    let h = &cmp.forward;
    let lift = |c: &TowerElt| c.lift_to(n);
    let pin = pi_n(tower, n)?.lift_to(n);
    let h_eps = h.eval(&t).lift_to(n);
    let h_pi = h.eval_with(&pin, lift);

    let fgl = formal_group_law(e, deg)?;
    let param = fgl.eval_with(&h_eps, &h_pi, |c| integer_to_tower(tower, n, c));
    let log_e = rational_series_to_k(tower, &formal_log(e, deg));
    let log_value = log_e.eval_with(&param, lift);

    let trunc = ideal_floor(tower, n, deg + 1).min(log_tail_floor(tower, n, deg));
    let effective_precision = log_value.abs_prec().min(trunc).min(newton_prec);
    if effective_precision < target {
        return Err(Error::InsufficientDegree {
            degree: deg,
            detail: format!("effective precision {effective_precision} below target {target}"),
        });
    }
    let closed = local_point_log(tower, n)?.log_value;
    let residual = (log_value.clone() - closed).residual_valuation();
    if residual < effective_precision {
        return Err(Error::Internal(format!(
            "series evaluation disagrees with the closed form at level {n}: residual {residual} < {effective_precision}"
        )));
    }
    Ok(LocalPoint { level: n, log_value, param_value: Some(param), effective_precision })
}

/// Result of evaluating [p] at random points of 𝔪_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCheck {
    pub level: i64,
    pub samples: usize,
    pub nonzero: usize,
    /// Valuation floor below which a value is certified nonzero.
    pub floor: i64,
}

impl TorsionCheck {
    pub fn pass(&self) -> bool {
        self.nonzero == self.samples
    }
}

fn random_ideal_element(tower: &Arc<TowerDesc>, n: i64, rng: &mut ChaCha8Rng) -> TowerElt {
    let z = tower.zp();
    let d = tower.d();
    let coords: Vec<UnramifiedElt> = (0..tower.level_dim(n))
        .map(|_| UnramifiedElt::from_raw(tower.field(), (0..d).map(|_| rng.gen_range(0..z.modulus())).collect()))
        .collect();
    let x = TowerElt::from_parts(tower, n, coords, 0, tower.prec() as i64);
    if n < 0 {
        x.mul_p_pow(1)
    } else {
        x * (TowerElt::eta(tower, n) - TowerElt::one(tower, n))
    }
}

/// Evaluates [p](t) for random nonzero t ∈ 𝔪_n and counts the values certified nonzero.
pub fn torsion_free_check(e: &CurveParams, tower: &Arc<TowerDesc>, n: i64, deg: usize, samples: usize, seed: u64) -> Result<TorsionCheck> {
    check_curve(e, tower)?;
    tower.check_level(n)?;
    let fgl = formal_group_law(e, deg)?;
    let mult = multiplication_series(&fgl, tower.p());
    let floor = ideal_floor(tower, n, deg + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonzero = 0;
    let mut taken = 0;
    while taken < samples {
        let t = random_ideal_element(tower, n, &mut rng);
        if t.is_zero() {
            continue;
        }
        taken += 1;
        let v = mult.eval_with(&t, |c| integer_to_tower(tower, n, c));
        if v.valuation().is_some_and(|w| w < floor) {
            nonzero += 1;
        }
    }
    Ok(TorsionCheck { level: n, samples, nonzero, floor })
}

/// [p](X) over Z through degree `deg`.
pub fn p_series(e: &CurveParams, deg: usize) -> Result<TruncSeries<BigInt>> {
    Ok(multiplication_series(&formal_group_law(e, deg)?, e.p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_shapes() {
        let t = TowerDesc::new(3, 2, 6, 2).unwrap();
        let l = local_point_log(&t, -1).unwrap();
        assert_eq!(l.log_value, TowerElt::from_base(&t, -1, &epsilon_n(&t, -1)));
        let l2 = local_point_log(&t, 2).unwrap();
        assert_eq!(l2.log_value.den_exp(), 1);
        let l0 = local_point_log(&t, 0).unwrap().log_value;
        let expect = TowerElt::from_base(&t, 0, &epsilon_n(&t, 0)) + pi_n(&t, 0).unwrap();
        assert_eq!(l0, expect);
    }

    #[test]
    fn congruence_mod_lower_level() {
        let t = TowerDesc::new(3, 2, 6, 3).unwrap();
        for n in -1..=3 {
            assert!(log_congruence_check(&t, n).unwrap());
        }
    }
}
