use rayon::prelude::*;

use plusminus::formal::curve::count_points;
use plusminus::formal::verify_trace_relations;
use plusminus::group_ring::delta_of;
use plusminus::lambda::{
    coinvariant_rank_law, coinvariant_torsion_closed_form, greenberg_property, kernel_freeness_property, module_report,
    present_plus, supplementary_structure_check,
};
use plusminus::lattice_lab::{check_exact_sequence, cyclicity_check, expected_cyclic, rank_row, Sign};
use plusminus::{Error, TowerDesc, Zp};

use crate::config::{gate, CampaignConfig, CheckKind};
use crate::report::{Outcome, Record, Report};

/// Largest level for the module checks: the presentations at m = n + 4 grow like p^m.
pub const MODULE_N_MAX: i64 = 2;
const LAMBDA_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug)]
enum Cell {
    Trace { p: u64, d: usize },
    Rank { p: u64, d: usize, n: i64, chi: usize },
    ExactSequence { p: u64, d: usize, n: i64, chi: usize },
    Cyclicity { p: u64, d: usize, n: i64 },
    Torsion { p: u64, d: usize, n: i64, m: i64 },
    RankLaw { p: u64, d: usize, n: i64, chi: usize, sign: Sign },
    Delta { p: u64, d: usize, chi: usize },
    Kernel { p: u64 },
    Greenberg { p: u64 },
    Supplementary { p: u64, d: usize, chi: usize, sign: Sign },
}

fn sign_label(s: Sign) -> &'static str {
    s.symbol()
}

fn cells(cfg: &CampaignConfig, p: u64, kind: CheckKind) -> Vec<Cell> {
    let chars = (p - 1) as usize;
    let mut out = Vec::new();
    let module_n = cfg.n_max.min(MODULE_N_MAX);
    match kind {
        CheckKind::Trace => out.extend(cfg.d.iter().map(|&d| Cell::Trace { p, d })),
        CheckKind::Ranks => {
            for &d in &cfg.d {
                for n in -1..=cfg.n_max {
                    out.extend((0..chars).map(|chi| Cell::Rank { p, d, n, chi }));
                }
                for n in 0..=cfg.n_max {
                    out.extend((0..chars).map(|chi| Cell::ExactSequence { p, d, n, chi }));
                }
            }
        }
        CheckKind::Cyclicity => {
            for &d in &cfg.d {
                out.extend((0..=cfg.n_max).map(|n| Cell::Cyclicity { p, d, n }));
            }
        }
        CheckKind::Torsion => {
            for &d in &cfg.d {
                for n in 0..=module_n {
                    out.extend([2, 4].map(|gap| Cell::Torsion { p, d, n, m: n + gap }));
                }
                for n in 0..=module_n {
                    for chi in 0..chars {
                        out.extend([Sign::Plus, Sign::Minus].map(|sign| Cell::RankLaw { p, d, n, chi, sign }));
                    }
                }
                out.extend((0..chars).map(|chi| Cell::Delta { p, d, chi }));
            }
        }
        CheckKind::Lambda => {
            out.push(Cell::Kernel { p });
            out.push(Cell::Greenberg { p });
            for &d in &cfg.d {
                for chi in 0..chars {
                    out.extend([Sign::Plus, Sign::Minus].map(|sign| Cell::Supplementary { p, d, chi, sign }));
                }
            }
        }
        CheckKind::All => unreachable!("expanded by CampaignConfig::selected"),
    }
    out
}

fn divisors(v: &[u32]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn tower(p: u64, d: usize, prec: u32, n_max: i64) -> Result<std::sync::Arc<TowerDesc>, Error> {
    TowerDesc::new(p, d, prec, n_max.max(0))
}

fn run_cell(cfg: &CampaignConfig, cell: Cell) -> Vec<Record> {
    match cell {
        Cell::Trace { p, d } => {
            let base = Record::new(p, "trace", "residual >= N - floor((n+1)/2)").d(d);
            let report = tower(p, d, cfg.precision, cfg.n_max).and_then(|t| verify_trace_relations(&t, cfg.n_max));
            match report {
                Err(e) => vec![base.failed_with("pass", &e)],
                Ok(r) => r
                    .checks
                    .iter()
                    .map(|c| {
                        Record::new(p, &format!("trace_rel{}", c.relation), "residual >= N - floor((n+1)/2)")
                            .d(d)
                            .n(c.n)
                            .residual(c.check.residual_valuation)
                            .values(format!(">={}", c.check.floor), c.check.residual_valuation, c.check.pass)
                    })
                    .collect(),
            }
        }
        Cell::Rank { p, d, n, chi } => {
            let norm = Record::new(p, "rank", "d(q_n+1) if n odd and chi triv, else d*q_n").d(d).n(n).chi(chi).sign("norm");
            let row = tower(p, d, cfg.lattice_precision, n).and_then(|t| rank_row(&t, n, chi));
            match row {
                Err(e) => vec![norm.failed_with("-", &e)],
                Ok(r) => {
                    let mut out = vec![norm.values(r.c_expected, r.c_rank, r.c_rank == r.c_expected)];
                    let pm = [
                        (Sign::Plus, r.plus_expected, r.plus_rank, "d*q_n^+"),
                        (Sign::Minus, r.minus_expected, r.minus_rank, "d*q_n^- + d[chi triv]"),
                    ];
                    for (sign, exp, got, formula) in pm {
                        if let (Some(x), Some(g)) = (exp, got) {
                            out.push(
                                Record::new(p, "rank", formula).d(d).n(n).chi(chi).sign(sign_label(sign)).values(x, g, x == g),
                            );
                        }
                    }
                    out
                }
            }
        }
        Cell::ExactSequence { p, d, n, chi } => {
            let rec = Record::new(p, "exact_seq", "rank of C_n meet C_(n-1) = d[chi triv]; sum = full").d(d).n(n).chi(chi);
            match tower(p, d, cfg.lattice_precision, n).and_then(|t| check_exact_sequence(&t, n, Some(chi))) {
                Err(e) => vec![rec.failed_with("-", &e)],
                Ok(r) => vec![rec.values(r.expected_intersection, r.rank_intersection, r.pass())],
            }
        }
        Cell::Cyclicity { p, d, n } => {
            let rec = Record::new(p, "cyclic", "cyclic unless 4 | d and n even").d(d).n(n);
            match tower(p, d, cfg.lattice_precision, n).and_then(|t| cyclicity_check(&t, n)) {
                Err(e) => vec![rec.failed_with(expected_cyclic(d, n), &e)],
                Ok(r) => vec![rec.values(r.expected_cyclic, r.cyclic, r.pass())],
            }
        }
        Cell::Torsion { p, d, n, m } => {
            let rec = Record::new(p, &format!("coinv_torsion_m{m}"), "#{even k in (n, m]} repeated d*q_n^- + delta times")
                .d(d)
                .n(n)
                .chi(0)
                .sign("+");
            let expected = coinvariant_torsion_closed_form(p, d, m as u32, n as u32);
            let measured = Zp::new(p, cfg.module_precision)
                .and_then(|zp| present_plus(zp, d, m as u32, 0))
                .and_then(|pres| module_report(&pres.coinvariants(n as u32)));
            match measured {
                Err(e) => vec![rec.failed_with(divisors(&expected), &e)],
                Ok(r) => vec![rec.values(divisors(&expected), divisors(&r.torsion), r.torsion == expected && !r.ambiguous)],
            }
        }
        Cell::RankLaw { p, d, n, chi, sign } => {
            let formula = match sign {
                Sign::Plus => "d*p^n + delta",
                Sign::Minus => "d*p^n",
            };
            let rec = Record::new(p, "coinv_rank", formula).d(d).n(n).chi(chi).sign(sign_label(sign));
            let law = Zp::new(p, cfg.module_precision).and_then(|zp| coinvariant_rank_law(zp, d, n as u32, chi, sign));
            match law {
                Err(e) => vec![rec.failed_with("-", &e)],
                Ok(r) => {
                    let totals: Vec<String> = r.totals().iter().map(usize::to_string).collect();
                    vec![rec.values(r.expected_total, totals.join(" "), r.pass())]
                }
            }
        }
        Cell::Delta { p, d, chi } => {
            let rec = Record::new(p, "delta", "2 if 4 | d and chi triv, else 0").d(d).chi(chi).sign("+");
            let expected = delta_of(d, chi);
            let law = Zp::new(p, cfg.module_precision).and_then(|zp| coinvariant_rank_law(zp, d, 0, chi, Sign::Plus));
            match law {
                Err(e) => vec![rec.failed_with(expected, &e)],
                Ok(r) => {
                    let measured: Vec<i64> = r.totals().iter().map(|&t| t as i64 - d as i64).collect();
                    let ok = measured.iter().all(|&m| m == expected as i64);
                    vec![rec.values(expected, measured[0], ok)]
                }
            }
        }
        Cell::Kernel { p } => {
            let rec = Record::new(p, "kernel_freeness", "counterexamples = 0");
            let r = Zp::new(p, cfg.module_precision)
                .and_then(|zp| kernel_freeness_property(zp, cfg.lambda_trials, LAMBDA_DEGREE, cfg.seed));
            match r {
                Err(e) => vec![rec.failed_with(0, &e)],
                Ok(r) => vec![rec.values(0, r.counterexamples.len(), r.pass() && r.instances >= cfg.lambda_trials)],
            }
        }
        Cell::Greenberg { p } => {
            let rec = Record::new(p, "greenberg_cokernel", "counterexamples = 0");
            let r = Zp::new(p, cfg.module_precision)
                .and_then(|zp| greenberg_property(zp, cfg.lambda_trials, LAMBDA_DEGREE, cfg.seed.wrapping_add(1)));
            match r {
                Err(e) => vec![rec.failed_with(0, &e)],
                Ok(r) => vec![rec.values(0, r.counterexamples.len(), r.pass() && r.instances >= cfg.lambda_trials)],
            }
        }
        Cell::Supplementary { p, d, chi, sign } => {
            let rec = Record::new(p, "supplementary", "Lambda^d + (Lambda/X)^delta").d(d).chi(chi).sign(sign_label(sign));
            let r = Zp::new(p, cfg.module_precision).and_then(|zp| supplementary_structure_check(zp, d, chi, sign));
            match r {
                Err(e) => vec![rec.failed_with("consistent", &e)],
                Ok(r) => {
                    let ok = r.consistent() && r.rival_rejected();
                    vec![rec.values("consistent", if ok { "consistent" } else { "inconsistent" }, ok)]
                }
            }
        }
    }
}

/// Runs the gate for every prime, then the selected checks on the primes that pass it.
pub fn run(cfg: &CampaignConfig) -> Report {
    let mut records = Vec::new();
    let mut work = Vec::new();
    for &p in &cfg.p {
        let a = cfg.curve_for(p).expect("validated config");
        let ap = p as i64 + 1 - count_points(a, p) as i64;
        let rec = Record::new(p, "ap_gate", "a_p = p + 1 - #E(F_p) = 0");
        match gate(a, p) {
            Ok(_) => {
                records.push(rec.values(0, ap, true));
                for kind in cfg.selected() {
                    work.extend(cells(cfg, p, kind));
                }
            }
            Err(msg) => {
                let mut r = rec.values(0, ap, false);
                r.outcome = Outcome::GateRejected;
                r.measured = format!("{ap} ({msg})");
                records.push(r);
            }
        }
    }
    let results: Vec<Vec<Record>> = work.par_iter().map(|&c| run_cell(cfg, c)).collect();
    records.extend(results.into_iter().flatten());
    Report::new(Some(cfg.clone()), cfg.seed, records)
}
