use plusminus::group_ring::{delta_of, omega_family, to_grpoly};
use plusminus::lambda::{
    coinvariant_rank_law, coinvariant_torsion_closed_form, expected_coinvariant_rank, expected_torsion_count,
    freeness_test, greenberg_property, kernel_freeness_property, lambda_rank, module_report, present_minus,
    present_plus, presentation_kernel, supplementary_structure_check,
};
use plusminus::lattice_lab::Sign;
use plusminus::Presentation;
use proptest::prelude::*;

mod common;
use common::{cyclic, hand_made, rows, zp};

#[test]
fn freeness_matches_ground_truth_on_hand_made_modules() {
    let cases = hand_made();
    assert_eq!(cases.len(), 20);
    for (name, m, free, nfs) in cases {
        let v = freeness_test(&m).unwrap();
        assert_eq!(v.is_free, free, "{name}: {v:?}");
        assert_eq!(v.no_finite_submodule, nfs, "{name}: {v:?}");
    }
}

#[test]
fn invariants_of_small_modules() {
    let v = freeness_test(&cyclic(&[0, 1])).unwrap();
    assert_eq!((v.coinvariant_rank, v.invariant_rank), (1, 1));
    let v = freeness_test(&rows(1, &[vec![vec![3]], vec![vec![0, 1]]])).unwrap();
    assert_eq!((v.coinvariant_rank, v.coinvariant_torsion.clone()), (0, vec![1]));
    assert_eq!((v.invariant_rank, v.invariant_torsion), (0, vec![1]));
    let v = freeness_test(&Presentation::free(zp(), 1, 2)).unwrap();
    assert_eq!((v.coinvariant_rank, v.invariant_rank), (2, 0));
}

#[test]
fn presentation_basics() {
    let z = zp();
    let m = Presentation::free(z, 2, 1).coinvariants(0);
    assert_eq!(m.relations().len(), 1);
    assert_eq!(module_report(&m).unwrap().rank, 2);
    assert_eq!(module_report(&Presentation::free(z, 1, 1).coinvariants(0)).unwrap().rank, 1);
    assert_eq!(module_report(&Presentation::free(z, 1, 2).coinvariants(2)).unwrap().rank, 18);
    assert!(Presentation::from_int_rows(z, 1, 2, &[vec![vec![1]]]).is_err());
    assert!(Presentation::free(z, 1, 1).direct_sum(&Presentation::free(z, 2, 1)).is_err());
    assert_eq!(Presentation::free(z, 4, 2).to_lambda().num_gens(), 8);
    assert_eq!(module_report(&cyclic(&[0, 1])).unwrap().rank, 1);
    let r = module_report(&cyclic(&[3])).unwrap_err();
    assert!(r.to_string().contains("finite"), "{r}");
}

#[test]
fn plus_part_at_level_zero() {
    let z = zp();
    for d in [1, 2, 3, 4] {
        let r = module_report(&present_plus(z, d, 0, 0).unwrap()).unwrap();
        assert_eq!((r.rank, r.torsion.len()), (d, 0), "d={d}");
        let direct = Presentation::new(z, d, 1, vec![vec![to_grpoly(&omega_family(3, 0).plus, z, d)]]).unwrap();
        assert_eq!(module_report(&direct).unwrap().rank, d);
    }
    assert!(present_plus(z, 1, 9, 0).is_err());
}

#[test]
fn minus_part_nontrivial_character_is_torsion_free() {
    let z = zp();
    for d in [1, 2, 4] {
        let r = module_report(&present_minus(z, d, 1, 1).unwrap()).unwrap();
        assert_eq!((r.rank, r.torsion.len()), (2 * d, 0));
        let r = module_report(&present_minus(z, d, 0, 1).unwrap()).unwrap();
        assert_eq!(r.total(), 0);
    }
}

#[test]
fn golden_coinvariant_torsion() {
    let z = zp();
    let r = module_report(&present_plus(z, 4, 4, 0).unwrap().coinvariants(2)).unwrap();
    assert_eq!(r.torsion, vec![1; 10]);
    assert_eq!(r.rank, 28);
    assert!(!r.ambiguous);
    assert_eq!(coinvariant_torsion_closed_form(3, 4, 4, 2), vec![1; 10]);
    assert_eq!(coinvariant_torsion_closed_form(3, 2, 4, 1), vec![2; 4]);
    assert_eq!(coinvariant_torsion_closed_form(3, 2, 3, 0), vec![1; 0]);
    assert_eq!(coinvariant_torsion_closed_form(3, 2, 4, 0), vec![2; 0]);
    assert_eq!(coinvariant_torsion_closed_form(3, 4, 4, 0), vec![2; 2]);
}

#[test]
fn rank_law_examples() {
    assert_eq!(expected_coinvariant_rank(3, 4, 1, 0, Sign::Plus), 14);
    assert_eq!(expected_coinvariant_rank(3, 4, 1, 0, Sign::Minus), 12);
    assert_eq!(expected_coinvariant_rank(3, 4, 1, 1, Sign::Plus), 12);
    assert_eq!(expected_torsion_count(3, 1, 1, 0, Sign::Plus), 2);
    assert_eq!(expected_torsion_count(3, 4, 0, 0, Sign::Plus), 2);
    let z = zp();
    let r = coinvariant_rank_law(z, 4, 1, 0, Sign::Plus).unwrap();
    assert!(r.pass(), "{r:?}");
    assert_eq!(r.totals(), vec![14, 14]);
    let r = coinvariant_rank_law(z, 2, 2, 1, Sign::Minus).unwrap();
    assert!(r.pass(), "{r:?}");
    assert_eq!(r.expected_total, 18);
}

#[test]
fn delta_is_the_excess_over_level() {
    for d in [1usize, 2, 3, 4, 8] {
        for chi in 0..2 {
            for n in 1..=3u32 {
                let total = expected_coinvariant_rank(3, d, n, chi, Sign::Plus);
                assert_eq!(total % 3usize.pow(n), delta_of(d, chi) % 3usize.pow(n));
                assert_eq!(total - d * 3usize.pow(n), delta_of(d, chi));
            }
        }
    }
}

#[test]
fn minus_modules_have_no_finite_submodule() {
    let z = zp();
    for n in 0..=2 {
        for chi in 0..2 {
            let v = freeness_test(&present_minus(z, 2, n, chi).unwrap()).unwrap();
            assert!(v.no_finite_submodule, "n={n} chi={chi}");
        }
    }
}

#[test]
fn kernels_of_presentations() {
    let k = presentation_kernel(&rows(2, &[vec![vec![0], vec![1]]])).unwrap();
    assert!(k.free);
    assert_eq!((k.rank, k.expected_rank), (1, 1));
    let k = presentation_kernel(&cyclic(&[0, 1])).unwrap();
    assert!(k.free);
    assert_eq!(k.rank, 1);
    assert_eq!(lambda_rank(&cyclic(&[0, 1])), 0);
    assert_eq!(lambda_rank(&Presentation::free(zp(), 1, 2)), 2);
    assert_eq!(lambda_rank(&Presentation::free(zp(), 2, 1)), 2);
}

#[test]
fn supplementary_structure() {
    let z = zp();
    let r = supplementary_structure_check(z, 4, 0, Sign::Plus).unwrap();
    assert_eq!(r.delta, 2);
    assert!(r.consistent(), "{r:?}");
    assert!(r.rival_rejected(), "{r:?}");
    assert!(r.rival_rank_n0.is_some());
    let r = supplementary_structure_check(z, 2, 0, Sign::Minus).unwrap();
    assert!(r.consistent() && r.rival_rejected());
    assert_eq!(r.rival_rank_n0, None);
}

#[test]
fn random_module_properties_small_run() {
    let z = zp();
    let k = kernel_freeness_property(z, 30, 6, 11).unwrap();
    assert!(k.pass(), "{k:?}");
    assert_eq!(k.instances, 30);
    let g = greenberg_property(z, 30, 6, 12).unwrap();
    assert!(g.pass(), "{g:?}");
}

fn small_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop::sample::select(vec![0i64, 1, -1, 2, 3, -3, 4, 9]), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn direct_sum_adds_reports(f in small_poly(), g in small_poly(), n in 0u32..=1) {
        let (a, b) = (cyclic(&f).coinvariants(n), cyclic(&g).coinvariants(n));
        let (ra, rb) = (module_report(&a).unwrap(), module_report(&b).unwrap());
        let s = module_report(&a.direct_sum(&b).unwrap()).unwrap();
        prop_assert_eq!(s.rank, ra.rank + rb.rank);
        let mut t = [ra.torsion, rb.torsion].concat();
        t.sort();
        prop_assert_eq!(s.torsion, t);
    }

    #[test]
    fn free_coinvariants_have_rank_g_d_pn(g in 0usize..=2, d in 1usize..=3, n in 0u32..=2) {
        let r = module_report(&Presentation::free(zp(), d, g).coinvariants(n)).unwrap();
        prop_assert_eq!(r.rank, g * d * 3usize.pow(n));
        prop_assert!(r.torsion.is_empty());
    }

    #[test]
    fn free_modules_pass_freeness(g in 0usize..=3) {
        let v = freeness_test(&Presentation::free(zp(), 1, g)).unwrap();
        prop_assert!(v.is_free && v.no_finite_submodule);
        prop_assert_eq!(v.coinvariant_rank, g);
    }
}
