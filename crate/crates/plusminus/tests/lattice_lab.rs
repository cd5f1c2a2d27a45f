use plusminus::group_ring::idempotents;
use plusminus::lattice_lab::{
    check_exact_sequence, cyclicity_check, expected_c_rank, expected_cyclic, expected_pm_rank, full_points,
    galois_span, generation_check, lift_lattice, norm_c, norm_subgroup, rank_row, Sign,
};
use plusminus::linalg::{membership, snf, snf_full, DEFAULT_MARGIN};
use plusminus::formal::local_point_log;
use plusminus::{Lattice, TowerDesc, Zp, ZpMatrix};
use proptest::prelude::*;

const PREC: u32 = 20;

fn vp(mut x: i128, p: i128) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// Elementary divisor valuations from the p-parts of determinantal divisors; `PREC` stands for zero.
fn oracle_diagonal(a: &[Vec<i64>], p: i128) -> Vec<u32> {
    let (r, c) = (a.len(), a[0].len());
    let mut prev = 0u32;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut best: Option<u32> = None;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let m: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j] as i128).collect()).collect();
                if let Some(v) = vp(det(&m), p) {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        match best {
            Some(v) => {
                out.push(v - prev);
                prev = v;
            }
            None => out.push(PREC),
        }
    }
    out
}

fn zp3() -> Zp {
    Zp::new(3, PREC).unwrap()
}

#[test]
fn snf_examples() {
    let z = zp3();
    let a = ZpMatrix::from_rows_i64(z, &[vec![3, 0], vec![0, 9]]);
    assert_eq!(snf(&a).diagonal(), &[1, 2]);
    let b = ZpMatrix::from_rows_i64(z, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    assert_eq!(snf(&b).diagonal(), oracle_diagonal(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).as_slice());
    let zero = ZpMatrix::zeros(z, 2, 3);
    assert_eq!(snf(&zero).rank(DEFAULT_MARGIN), 0);
    let lat = Lattice::new(ZpMatrix::from_rows_i64(z, &[vec![1, 1], vec![1, 1]]), 0);
    assert_eq!(lat.rank(), 1);
    assert_eq!(lat.elementary_divisors(), vec![0]);
}

#[test]
fn snf_certificate_on_example() {
    let z = zp3();
    let a = ZpMatrix::from_rows_i64(z, &[vec![3, 6, 1], vec![9, 0, 2], vec![0, 27, 5]]);
    let s = snf_full(&a);
    assert!(s.certify(&a).unwrap().is_valid());
}

#[test]
fn membership_examples() {
    let z = zp3();
    let b = ZpMatrix::from_rows_i64(z, &[vec![3, 0], vec![0, 1]]);
    let vs = ZpMatrix::from_rows_i64(z, &[vec![6, 1], vec![5, 0]]);
    let m = membership(&b, &vs, DEFAULT_MARGIN);
    assert_eq!(m.members, vec![true, false]);
    assert!(!m.ambiguous);
}

#[test]
fn base_and_norm_spans() {
    let t = TowerDesc::new(3, 2, 12, 2).unwrap();
    let chis = idempotents(t.zp()).unwrap();
    let d_base = local_point_log(&t, -1).unwrap().log_value;
    assert_eq!(galois_span(&[d_base.clone()], -1, None).unwrap().rank(), 2);
    assert_eq!(galois_span(&[d_base], -1, Some(&chis[1])).unwrap().rank(), 0);
    let triv = Some(&chis[0]);
    assert_eq!(norm_c(&t, 2, 2, triv).unwrap().rank(), 14);
    assert_eq!(norm_subgroup(&t, 2, Sign::Plus, triv).unwrap().rank(), 14);
    assert_eq!(norm_subgroup(&t, 2, Sign::Minus, triv).unwrap().rank(), 6);
    assert_eq!(full_points(&t, 2, triv).unwrap().rank(), 18);
    // Both characters together.
    assert_eq!(norm_c(&t, 2, 2, None).unwrap().rank(), 28);
    assert_eq!(full_points(&t, 2, None).unwrap().rank(), 36);
    let plus1 = norm_subgroup(&t, 1, Sign::Plus, None).unwrap();
    let plus0 = lift_lattice(&t, &norm_subgroup(&t, 0, Sign::Plus, None).unwrap(), 0, 1);
    assert!(plus1.equals(&plus0));
    assert!(galois_span(&[], 0, None).is_err());
}

#[test]
fn closed_form_rank_values() {
    assert_eq!(expected_c_rank(3, 2, 1, 0), 6);
    assert_eq!(expected_c_rank(3, 2, 1, 1), 4);
    assert_eq!(expected_c_rank(3, 4, -1, 0), 4);
    assert_eq!(expected_c_rank(3, 4, -1, 1), 0);
    assert_eq!(expected_pm_rank(3, 2, 2, 0, Sign::Plus), 14);
    assert_eq!(expected_pm_rank(3, 2, 2, 0, Sign::Minus), 6);
    assert_eq!(expected_pm_rank(3, 2, 2, 1, Sign::Minus), 4);
    assert_eq!(expected_pm_rank(3, 1, 0, 0, Sign::Minus), 1);
}

#[test]
fn rank_rows_small_grid() {
    for d in [1, 2] {
        let t = TowerDesc::new(3, d, 12, 2).unwrap();
        for n in -1..=2 {
            for chi in 0..2 {
                let r = rank_row(&t, n, chi).unwrap();
                assert!(r.pass(), "{r:?}");
            }
        }
    }
}

#[test]
fn exact_sequence_examples() {
    let t = TowerDesc::new(3, 2, 12, 2).unwrap();
    let r0 = check_exact_sequence(&t, 0, None).unwrap();
    assert!(r0.pass(), "{r0:?}");
    let r2 = check_exact_sequence(&t, 2, Some(0)).unwrap();
    assert_eq!((r2.rank_c_n, r2.rank_c_prev, r2.rank_intersection, r2.rank_sum), (14, 6, 2, 18));
    assert!(r2.pass());
    let chi = check_exact_sequence(&t, 2, Some(1)).unwrap();
    assert_eq!(chi.rank_intersection, 0);
    assert!(chi.pass());
    let both = check_exact_sequence(&t, 2, None).unwrap();
    assert_eq!((both.rank_c_n, both.rank_c_prev, both.rank_intersection, both.rank_sum), (28, 10, 2, 36));
    let t4 = TowerDesc::new(3, 4, 12, 1).unwrap();
    let r = check_exact_sequence(&t4, 1, Some(0)).unwrap();
    assert_eq!((r.rank_c_n, r.rank_c_prev, r.rank_intersection, r.rank_sum), (12, 4, 4, 12));
    assert!(r.pass());
    assert!(check_exact_sequence(&t4, -1, None).is_err());
}

#[test]
fn cyclicity_examples() {
    for (d, n) in [(1, 0), (2, 2), (3, 1), (4, 0), (4, 1), (4, 2)] {
        let t = TowerDesc::new(3, d, 12, n).unwrap();
        let r = cyclicity_check(&t, n).unwrap();
        assert_eq!(r.cyclic, expected_cyclic(d, n), "d={d} n={n}");
    }
    assert!(!expected_cyclic(8, 2));
    assert!(expected_cyclic(8, 3));
}

#[test]
fn uniformizer_and_point_generate() {
    for (d, n) in [(1, 0), (2, 1), (1, 2)] {
        let t = TowerDesc::new(3, d, 12, n).unwrap();
        assert!(generation_check(&t, n).unwrap().pass(), "d={d} n={n}");
    }
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows)
}

fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    // Product of elementary matrices: unit upper- and lower-triangular factors.
    (prop::collection::vec(-3i64..=3, n * n), prop::collection::vec(-3i64..=3, n * n)).prop_map(move |(a, b)| {
        let upper: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else if j > i { a[i * n + j] } else { 0 }).collect()).collect();
        let lower: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else if j < i { b[i * n + j] } else { 0 }).collect()).collect();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| upper[i][k] * lower[k][j]).sum()).collect()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_matches_determinantal_divisors(a in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| small_matrix(r, c))) {
        let z = zp3();
        let s = snf(&ZpMatrix::from_rows_i64(z, &a));
        prop_assert_eq!(s.diagonal().to_vec(), oracle_diagonal(&a, 3));
    }

    #[test]
    fn snf_invariant_under_unimodular_change(a in small_matrix(3, 4), u in unimodular(3), v in unimodular(4)) {
        let z = zp3();
        let (ma, mu, mv) = (ZpMatrix::from_rows_i64(z, &a), ZpMatrix::from_rows_i64(z, &u), ZpMatrix::from_rows_i64(z, &v));
        let base = snf(&ma);
        prop_assert_eq!(snf(&mu.mul(&ma).mul(&mv)).diagonal().to_vec(), base.diagonal().to_vec());
        let full = snf_full(&ma);
        prop_assert!(full.certify(&ma).unwrap().is_valid());
    }

    #[test]
    fn lattice_sum_and_intersection_ranks(a in small_matrix(4, 2), b in small_matrix(4, 2)) {
        let z = zp3();
        let la = Lattice::new(ZpMatrix::from_rows_i64(z, &a), 0);
        let lb = Lattice::new(ZpMatrix::from_rows_i64(z, &b), 0);
        let (s, i) = (la.sum(&lb), la.intersect(&lb));
        prop_assert_eq!(s.rank() + i.rank(), la.rank() + lb.rank());
        prop_assert!(s.contains(&la) && s.contains(&lb));
        prop_assert!(la.contains(&i) && lb.contains(&i));
    }
}
