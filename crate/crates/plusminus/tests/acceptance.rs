//! Ten acceptance criteria, one line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use plusminus::formal::curve::{count_points, CurveParams};
use plusminus::formal::{comparison_series, formal_exp, formal_log, honda_check, honda_log, verify_trace_relations};
use plusminus::group_ring::{alternating_element, annihilator, is_unit, phi_plus_phi_inv};
use plusminus::lambda::{
    coinvariant_rank_law, freeness_test, greenberg_property, kernel_freeness_property, module_report, present_plus,
};
use plusminus::lattice_lab::{check_exact_sequence, cyclicity_check, rank_row, Sign};
use plusminus::{GroupRingElt, TowerDesc, TruncSeries, Zp};

mod common;

const TRACE_CELLS: [(u64, &str, u32, &[usize], i64); 2] = [(3, "ss3", 4, &[1, 2, 4], 2), (5, "ss23", 3, &[1, 2], 1)];
const TRACE_CELL_BUDGET: Duration = Duration::from_secs(120);
const UNIT_BUDGET: Duration = Duration::from_secs(1);
const RANK_BUDGET: Duration = Duration::from_secs(600);
const LAMBDA_BUDGET: Duration = Duration::from_secs(300);
const LATTICE_PREC: u32 = 12;
const MODULE_PREC: u32 = 20;
const GRID_D: [usize; 3] = [1, 2, 4];
const GRID_N_MAX: i64 = 3;
const CYCLIC_D: [usize; 5] = [1, 2, 3, 4, 8];
const MODULE_N_MAX: u32 = 2;
const TRIALS: usize = 200;
const DEGREE_BOUND: usize = 6;
const SEED: u64 = 0;
const SERIES_DEG: usize = 30;

type Outcome = Result<String, String>;

fn q(p: i64, n: i64) -> i64 {
    if n < 0 {
        return 1;
    }
    (0..=n).map(|i| (-1i64).pow(i as u32) * p.pow((n - i) as u32)).sum()
}

fn q_plus(p: i64, n: i64) -> i64 {
    if n % 2 == 0 {
        q(p, n)
    } else {
        q(p, n - 1)
    }
}

fn q_minus(p: i64, n: i64) -> i64 {
    p.pow(n as u32) - q_plus(p, n)
}

fn delta(d: usize, chi: usize) -> usize {
    if d % 4 == 0 && chi == 0 {
        2
    } else {
        0
    }
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn trace_relations() -> Outcome {
    let mut cells = 0;
    let mut slowest = Duration::ZERO;
    for (p, curve, prec, ds, n_max) in TRACE_CELLS {
        let e = CurveParams::from_preset(curve, p).map_err(|e| e.to_string())?;
        check(e.a_p() == 0, || format!("{curve} has a_{p} = {}", e.a_p()))?;
        for &d in ds {
            let start = Instant::now();
            let t = TowerDesc::new(p, d, prec, n_max).map_err(|e| e.to_string())?;
            let r = verify_trace_relations(&t, n_max).map_err(|e| e.to_string())?;
            for c in &r.checks {
                let floor = prec as i64 - (c.n + 1).div_euclid(2);
                check(c.check.residual_valuation >= floor, || {
                    format!("p={p} d={d} n={} relation {}: residual {} < {floor}", c.n, c.relation, c.check.residual_valuation)
                })?;
            }
            let took = start.elapsed();
            check(took <= TRACE_CELL_BUDGET, || format!("p={p} d={d} took {took:?}"))?;
            slowest = slowest.max(took);
            cells += 1;
        }
    }
    Ok(format!("{cells} cells, slowest {:.2}s", slowest.as_secs_f64()))
}

fn ap_gate() -> Outcome {
    let a = count_points([0, 0, 0, -1, 0], 3);
    let b = count_points([0, 0, 0, 0, 1], 5);
    check(a == 4 && b == 6, || format!("#E(F_3) = {a}, #E(F_5) = {b}"))?;
    Ok("#E(F_3) = 4, #E(F_5) = 6".into())
}

fn unit_dichotomy() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for p in [3, 5, 7] {
        let z = Zp::new(p, 8).map_err(|e| e.to_string())?;
        for d in 1..=16 {
            let x = phi_plus_phi_inv(z, d);
            let (unit, inv) = is_unit(&x);
            check(unit == (d % 4 != 0), || format!("p={p} d={d}: unit = {unit}"))?;
            if let Some(y) = inv {
                check(x.clone() * y == GroupRingElt::one(z, d), || format!("p={p} d={d}: bad inverse"))?;
            }
            if d % 4 == 0 {
                let ann = annihilator(&x);
                let alt = alternating_element(z, d);
                let shifted = GroupRingElt::f_pow(z, d, 1) * alt.clone();
                check(ann.rank == 2, || format!("p={p} d={d}: annihilator rank {}", ann.rank))?;
                check((x.clone() * alt).is_zero() && (x * shifted).is_zero(), || format!("p={p} d={d}: alternating sum"))?;
            }
            cases += 1;
        }
    }
    let took = start.elapsed();
    check(took < UNIT_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{cases} cases in {:.3}s", took.as_secs_f64()))
}

fn rank_tables() -> Outcome {
    let start = Instant::now();
    let p = 3u64;
    let mut cells = 0;
    for d in GRID_D {
        for n in -1..=GRID_N_MAX {
            let t = TowerDesc::new(p, d, LATTICE_PREC, n.max(0)).map_err(|e| e.to_string())?;
            for chi in 0..(p - 1) as usize {
                let r = rank_row(&t, n, chi).map_err(|e| format!("d={d} n={n} chi={chi}: {e}"))?;
                let triv = chi == 0;
                let (pi, di) = (p as i64, d as i64);
                let c = if n < 0 {
                    if triv { di } else { 0 }
                } else if n % 2 == 1 && triv {
                    di * (q(pi, n) + 1)
                } else {
                    di * q(pi, n)
                };
                check(r.c_rank as i64 == c, || format!("d={d} n={n} chi={chi}: C rank {} vs {c}", r.c_rank))?;
                if n >= 0 {
                    let plus = di * q_plus(pi, n);
                    let minus = di * q_minus(pi, n) + if triv { di } else { 0 };
                    check(r.plus_rank == Some(plus as usize) && r.minus_rank == Some(minus as usize), || {
                        format!("d={d} n={n} chi={chi}: ± ranks {:?} {:?} vs {plus} {minus}", r.plus_rank, r.minus_rank)
                    })?;
                }
                cells += 1;
            }
        }
    }
    let took = start.elapsed();
    check(took <= RANK_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{cells} cells in {:.2}s", took.as_secs_f64()))
}

fn exact_sequence() -> Outcome {
    let p = 3u64;
    let mut cells = 0;
    for d in GRID_D {
        for n in 0..=GRID_N_MAX {
            let t = TowerDesc::new(p, d, LATTICE_PREC, n).map_err(|e| e.to_string())?;
            for chi in 0..(p - 1) as usize {
                let r = check_exact_sequence(&t, n, Some(chi)).map_err(|e| e.to_string())?;
                let inter = if chi == 0 { d } else { 0 };
                check(r.rank_intersection == inter, || format!("d={d} n={n} chi={chi}: intersection {}", r.rank_intersection))?;
                check(r.sum_is_full && r.intersection_is_base, || format!("d={d} n={n} chi={chi}: {r:?}"))?;
                check(r.rank_sum + r.rank_intersection == r.rank_c_n + r.rank_c_prev, || format!("d={d} n={n}: not additive"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells"))
}

fn cyclicity() -> Outcome {
    let mut cells = 0;
    for d in CYCLIC_D {
        for n in 0..=GRID_N_MAX {
            let t = TowerDesc::new(3, d, LATTICE_PREC, n).map_err(|e| e.to_string())?;
            let r = cyclicity_check(&t, n).map_err(|e| format!("d={d} n={n}: {e}"))?;
            let extra_generator = d % 4 == 0 && n % 2 == 0;
            check(r.cyclic != extra_generator, || format!("d={d} n={n}: d_-1 in span = {}", r.cyclic))?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells"))
}

fn torsion_closed_form() -> Outcome {
    let z = Zp::new(3, MODULE_PREC).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for d in [2, 4] {
        for n in 0..=MODULE_N_MAX {
            for gap in [2, 4] {
                let m = n + gap;
                let r = present_plus(z, d, m, 0)
                    .and_then(|pres| module_report(&pres.coinvariants(n)))
                    .map_err(|e| format!("d={d} m={m} n={n}: {e}"))?;
                let e = (n + 1..=m).filter(|k| k % 2 == 0).count() as u32;
                let count = d * q_minus(3, n as i64) as usize + delta(d, 0);
                let expect = if e == 0 { Vec::new() } else { vec![e; count] };
                check(r.torsion == expect && !r.ambiguous, || format!("d={d} m={m} n={n}: {:?} vs {expect:?}", r.torsion))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} multisets"))
}

fn rank_law() -> Outcome {
    let z = Zp::new(3, MODULE_PREC).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for d in GRID_D {
        for chi in 0..2 {
            for n in 0..=MODULE_N_MAX {
                for sign in [Sign::Plus, Sign::Minus] {
                    let r = coinvariant_rank_law(z, d, n, chi, sign).map_err(|e| e.to_string())?;
                    let base = d * 3usize.pow(n);
                    let expect = if sign == Sign::Plus { base + delta(d, chi) } else { base };
                    check(r.totals().iter().all(|&t| t == expect), || {
                        format!("d={d} chi={chi} n={n} {}: {:?} vs {expect}", sign.symbol(), r.totals())
                    })?;
                    if sign == Sign::Plus && n == 0 {
                        let excess = r.totals()[0] - d;
                        check(excess == if d % 4 == 0 && chi == 0 { 2 } else { 0 }, || format!("d={d} chi={chi}: δ = {excess}"))?;
                    }
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("{cells} cells"))
}

fn lambda_predicates() -> Outcome {
    let start = Instant::now();
    let cases = common::hand_made();
    for (name, m, free, nfs) in &cases {
        let v = freeness_test(m).map_err(|e| format!("{name}: {e}"))?;
        check(v.is_free == *free && v.no_finite_submodule == *nfs, || format!("{name}: {v:?}"))?;
    }
    let z = Zp::new(3, MODULE_PREC).map_err(|e| e.to_string())?;
    let k = kernel_freeness_property(z, TRIALS, DEGREE_BOUND, SEED).map_err(|e| e.to_string())?;
    let g = greenberg_property(z, TRIALS, DEGREE_BOUND, SEED + 1).map_err(|e| e.to_string())?;
    check(k.instances >= TRIALS && k.counterexamples.is_empty(), || format!("kernel: {k:?}"))?;
    check(g.instances >= TRIALS && g.counterexamples.is_empty(), || format!("greenberg: {g:?}"))?;
    let took = start.elapsed();
    check(took <= LAMBDA_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "{} modules, kernel {} / greenberg {} instances, 0 counterexamples, {:.2}s",
        cases.len(),
        k.instances,
        g.instances,
        took.as_secs_f64()
    ))
}

fn series_integrity() -> Outcome {
    for (curve, p) in [("ss3", 3), ("ss23", 5)] {
        let e = CurveParams::from_preset(curve, p).map_err(|e| e.to_string())?;
        let log = formal_log(&e, SERIES_DEG);
        let exp = formal_exp(&e, SERIES_DEG);
        let x = TruncSeries::var(SERIES_DEG, log.coeff(0));
        check(exp.compose(&log) == x && log.compose(&exp) == x, || format!("{curve}: exp∘log ≠ X"))?;
        for d in [1, 2] {
            let t = TowerDesc::new(p, d, 6, 1).map_err(|e| e.to_string())?;
            for n in -1..=1 {
                let h = honda_check(&honda_log(&t, n, SERIES_DEG).map_err(|e| e.to_string())?, p);
                check(h.pass(), || format!("{curve} d={d} n={n}: {h:?}"))?;
                let c = comparison_series(&e, &t, n, SERIES_DEG).map_err(|e| e.to_string())?;
                check(c.is_integral(), || format!("{curve} d={d} n={n}: comparison has p^-{}", c.max_den_exp()))?;
            }
        }
    }
    Ok(format!("D = {SERIES_DEG}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("trace relations", trace_relations),
        ("a_p gate", ap_gate),
        ("unit/annihilator dichotomy", unit_dichotomy),
        ("rank tables", rank_tables),
        ("exact sequence", exact_sequence),
        ("cyclicity dichotomy", cyclicity),
        ("coinvariant torsion", torsion_closed_form),
        ("coinvariant rank law", rank_law),
        ("module predicates", lambda_predicates),
        ("series integrity", series_integrity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} {name:<28} PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name:<28} FAIL  {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
