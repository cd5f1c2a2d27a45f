#![allow(dead_code)]

use plusminus::{Presentation, Zp};

pub fn zp() -> Zp {
    Zp::new(3, 20).unwrap()
}

pub fn rows(gens: usize, rels: &[Vec<Vec<i64>>]) -> Presentation {
    Presentation::from_int_rows(zp(), 1, gens, rels).unwrap()
}

pub fn cyclic(f: &[i64]) -> Presentation {
    rows(1, &[vec![f.to_vec()]])
}

pub fn sum(parts: &[Presentation]) -> Presentation {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, m| acc.direct_sum(m).unwrap())
}

// (module, free, no finite submodule)
pub fn hand_made() -> Vec<(&'static str, Presentation, bool, bool)> {
    let lam = || Presentation::free(zp(), 1, 1);
    let lx = || cyclic(&[0, 1]);
    let lp = || cyclic(&[3]);
    let lpx = || rows(1, &[vec![vec![3]], vec![vec![0, 1]]]);
    vec![
        ("0", Presentation::free(zp(), 1, 0), true, true),
        ("Λ", lam(), true, true),
        ("Λ³", Presentation::free(zp(), 1, 3), true, true),
        ("Λ/X", lx(), false, true),
        ("Λ/p", lp(), false, true),
        ("Λ/(p,X)", lpx(), false, false),
        ("Λ⊕Λ/X", sum(&[lam(), lx()]), false, true),
        ("Λ⊕Λ/(p,X)", sum(&[lam(), lpx()]), false, false),
        ("Λ/X⊕Λ/p", sum(&[lx(), lp()]), false, true),
        ("Λ/X²", cyclic(&[0, 0, 1]), false, true),
        ("Λ/(X-p)", cyclic(&[-3, 1]), false, true),
        ("Λ/p²", cyclic(&[9]), false, true),
        ("Λ/(p²,X)", rows(1, &[vec![vec![9]], vec![vec![0, 1]]]), false, false),
        ("Λ/(p,X²)", rows(1, &[vec![vec![3]], vec![vec![0, 0, 1]]]), false, false),
        ("Λ/(X²+3X+3)", cyclic(&[3, 3, 1]), false, true),
        ("(p,X)", rows(2, &[vec![vec![0, 1], vec![-3]]]), false, true),
        ("Λ/1", cyclic(&[1]), true, true),
        ("Λ²/(1,X)", rows(2, &[vec![vec![1], vec![0, 1]]]), true, true),
        ("Λ²/(p,X)", rows(2, &[vec![vec![3], vec![0, 1]]]), false, true),
        ("Λ/X⊕Λ/(p,X)⊕Λ", sum(&[lx(), lpx(), lam()]), false, false),
    ]
}

