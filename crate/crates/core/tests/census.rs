mod support;

use std::collections::BTreeSet;

use shadow_core::census::{
    classes, enumerate, has_simple_line, lines_without_simple_region, CensusError, CensusFilter,
};
use shadow_core::families::build_z;
use shadow_core::group::{fundamental_group, verify_claims};
use shadow_core::{canonical_form, GleamMode};
use support::{brute_isomorphic, naive_forms};

fn forms(n: usize, workers: usize) -> BTreeSet<Vec<u8>> {
    classes(n, workers).unwrap().into_iter().map(|c| c.form).collect()
}

#[test]
fn golden_counts() {
    let counts: Vec<usize> = (0..=2).map(|n| classes(n, 2).unwrap().len()).collect();
    assert_eq!(counts, vec![3, 11, 173]);
}

#[test]
#[ignore = "about half a minute on one core"]
fn golden_count_three_vertices() {
    assert_eq!(classes(3, 4).unwrap().len(), 5929);
}

#[test]
fn naive_enumeration_agrees() {
    for n in 1..=2u32 {
        let ours = forms(n as usize, 2);
        assert_eq!(naive_forms(n, false), ours, "n={n}");
        assert_eq!(naive_forms(n, true), ours, "n={n} reversed");
    }
}

#[test]
fn representatives_pairwise_distinct_by_brute_force() {
    let reps: Vec<_> = enumerate(&CensusFilter::up_to(1), 1, None).unwrap().into_iter().map(|c| c.poly).collect();
    for i in 0..reps.len() {
        assert!(brute_isomorphic(&reps[i], &reps[i]));
        for j in i + 1..reps.len() {
            assert!(!brute_isomorphic(&reps[i], &reps[j]), "{i} ~ {j}");
        }
    }
}

#[test]
fn forms_are_stable() {
    for c in enumerate(&CensusFilter::up_to(2), 1, None).unwrap() {
        assert_eq!(canonical_form(&c.poly, GleamMode::Ignore).unwrap(), c.form);
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let base: Vec<_> = classes(2, 1).unwrap();
    for w in [4, 8] {
        assert_eq!(classes(2, w).unwrap(), base);
    }
}

#[test]
fn every_class_with_two_regions_has_a_simple_line() {
    let mut single = 0;
    for c in enumerate(&CensusFilter::up_to(2), 2, None).unwrap() {
        if c.poly.complexity() >= 1 && c.poly.region_count() >= 2 {
            assert!(has_simple_line(&c.poly));
        } else if !has_simple_line(&c.poly) {
            single += 1;
        }
    }
    // a lone region passes every line three times
    assert!(single > 0);
}

#[test]
fn not_every_line_sees_a_simple_region() {
    let z1 = build_z(1).unwrap();
    assert!(has_simple_line(&z1));
    assert!(!lines_without_simple_region(&z1).is_empty());
    let bad = enumerate(&CensusFilter::up_to(2), 2, None)
        .unwrap()
        .into_iter()
        .filter(|c| c.poly.region_count() >= 2 && !lines_without_simple_region(&c.poly).is_empty())
        .count();
    assert!(bad > 0);
}

#[test]
fn claims_hold_on_eligible_classes() {
    let mut eligible = 0;
    for c in enumerate(&CensusFilter::up_to(2), 2, None).unwrap() {
        let pres = fundamental_group(&c.poly).unwrap();
        let r = verify_claims(&c.poly, &pres);
        if r.hypotheses.all() {
            eligible += 1;
            assert!(r.all_hold(), "{:?}", r);
        }
    }
    assert_eq!(eligible, 137);
}

#[test]
fn filter_and_ceiling() {
    let all = enumerate(&CensusFilter::up_to(2), 1, None).unwrap();
    let mut f = CensusFilter::up_to(2);
    f.min_regions = 2;
    f.connected_quartic_only = true;
    let some = enumerate(&f, 1, None).unwrap();
    assert!(some.len() < all.len());
    assert!(some.iter().all(|c| c.poly.region_count() >= 2 && c.poly.is_quartic_graph()));
    assert!(matches!(
        enumerate(&CensusFilter::up_to(4), 1, None),
        Err(CensusError::AboveCeiling { requested: 4, ceiling: 3 })
    ));
    assert!(matches!(enumerate(&CensusFilter::up_to(3), 1, Some(2)), Err(CensusError::AboveCeiling { .. })));
}
