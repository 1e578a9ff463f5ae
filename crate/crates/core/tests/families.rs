mod support;

use std::collections::BTreeMap;

use num_rational::Rational64;
use shadow_core::census::{enumerate, CensusFilter};
use shadow_core::families::{build_x, build_x_punctured, build_z};
use shadow_core::format::{from_json, to_json};
use shadow_core::group::presentation::visibly_free_rank;
use shadow_core::group::{
    abelianization, fundamental_group, rank_lower_bound, spanning_tree, verify_claims, AbelianGroup, FundamentalError,
};
use shadow_core::moves::{
    boundary_dispose, puncture, vertex_create, vertex_creation_configs, DisposalSite, MoveError, VertexSite,
};
use shadow_core::regions::GleamError;
use shadow_core::{
    canonical_form, euler_characteristic, isomorphic, parse_text, set_gleams, to_text, validate, z2_gleams, GleamMode,
    RegionCap, ShadowPolyhedron,
};
use support::{circle, oracle_close};

/// First Betti number of the singular set, counting circle components.
fn graph_betti(p: &ShadowPolyhedron) -> usize {
    p.edges().len() + 1 + p.circles().len()
        - p.vertices().len()
        - usize::from(p.vertices().is_empty() && !p.circles().is_empty())
}

fn z_rank(k: usize) -> AbelianGroup {
    AbelianGroup { free_rank: k, torsion: vec![] }
}

#[test]
fn x_family_shape() {
    let x1 = build_x(1).unwrap();
    assert!(x1.vertices().is_empty() && x1.circles().len() == 1 && x1.region_count() == 1);
    let x2 = build_x(2).unwrap();
    assert_eq!(x2.complexity(), 1);
    assert_eq!(x2.edges().len(), 2);
    assert!(x2.edges().values().all(|e| e.source.vertex == e.target.vertex));
    for k in 1..=10 {
        let x = build_x(k).unwrap();
        assert_eq!(x.complexity(), k - 1);
        assert_eq!(x.region_count(), 1);
        assert_eq!(graph_betti(&x), k);
        assert_eq!(euler_characteristic(&x), 2 - k as i64);
    }
}

#[test]
fn punctured_family() {
    let x1 = build_x(1).unwrap();
    let p = puncture(&x1, 0).unwrap();
    assert_eq!(euler_characteristic(&p), euler_characteristic(&x1) - 1);
    assert!(matches!(puncture(&p, 0), Err(MoveError::NotADisk(0))));
    assert!(matches!(puncture(&p, 5), Err(MoveError::UnknownCircuit(5))));
    for k in 1..=10 {
        let xo = build_x_punctured(k).unwrap();
        assert!(!xo.is_special());
        let pres = fundamental_group(&xo).unwrap();
        assert!(pres.relators().is_empty());
        assert_eq!(pres.generators().len(), k);
        assert_eq!(abelianization(&pres), z_rank(k));
        let b = rank_lower_bound(&xo, true).unwrap();
        assert_eq!(b.bound_sc, k + 1);
    }
    let z3 = build_z(3).unwrap();
    for i in 0..2 {
        let q = puncture(&z3, i).unwrap();
        assert!(q.has_boundary() && !q.is_special());
        assert!(validate(&q).passed());
    }
}

#[test]
fn z_family() {
    for k in 1..=64 {
        let z = build_z(k).unwrap();
        assert!(validate(&z).passed());
        assert!(z.is_special());
        assert_eq!(z.complexity(), k + 1);
        assert_eq!(z.region_count(), 2);
        assert_eq!(euler_characteristic(&z), 1 - k as i64);
        let pres = fundamental_group(&z).unwrap();
        assert_eq!(abelianization(&pres), z_rank(k));
        assert!(verify_claims(&z, &pres).all_hold());
        assert_eq!(visibly_free_rank(&pres), Some(k));
        assert_eq!(rank_lower_bound(&z, true).unwrap().bound_sc, k + 1);
    }
    let z1 = fundamental_group(&build_z(1).unwrap()).unwrap();
    assert_eq!((z1.generators().len(), z1.relators().len()), (3, 2));
}

#[test]
fn disposal_on_punctured_x() {
    for k in 1..=16 {
        let xo = build_x_punctured(k).unwrap();
        let z = boundary_dispose(&xo, DisposalSite::Default).unwrap();
        assert_eq!(z.complexity(), xo.complexity() + 2);
        assert_eq!(z.region_count(), xo.region_count() + 1);
        assert!(z.caps().values().all(|c| c.is_disk()));
        assert!(isomorphic(&z, &build_z(k).unwrap(), GleamMode::Include).unwrap());
    }
    // at k = 1 both regions end up with gleam 0
    let z1 = build_z(1).unwrap();
    let mut doubled: Vec<i64> = z1.caps().values().map(|c| c.gleam().unwrap().doubled()).collect();
    doubled.sort();
    assert_eq!(doubled, vec![0, 0]);
}

#[test]
fn disposal_preconditions() {
    let z = build_z(2).unwrap();
    assert!(matches!(boundary_dispose(&z, DisposalSite::Default), Err(MoveError::NoBoundary)));
    let two = puncture(&puncture(&z, 0).unwrap(), 1).unwrap();
    assert!(matches!(boundary_dispose(&two, DisposalSite::Default), Err(MoveError::MultipleBoundaryCircles(2))));
}

#[test]
fn vertex_creation_everywhere() {
    for c in enumerate(&CensusFilter::up_to(1), 1, None).unwrap() {
        let p = &c.poly;
        for segment in p.segments() {
            for config in 0..vertex_creation_configs().len() {
                let q = vertex_create(p, VertexSite::At { segment, config }).unwrap();
                assert!(validate(&q.without_gleams()).checks.iter().all(|r| r.passed || r.name == "gleam-parity"));
                assert_eq!(q.complexity(), p.complexity() + 1);
                assert_eq!(q.region_count(), p.region_count());
                assert_eq!(graph_betti(&q), graph_betti(p) + 1);
            }
        }
    }
    let xo = build_x_punctured(2).unwrap();
    assert!(matches!(vertex_create(&xo, VertexSite::Default), Err(MoveError::NotSpecial)));
    let x2 = build_x(2).unwrap();
    let bad = VertexSite::At { segment: x2.segments()[0], config: 99 };
    assert!(matches!(vertex_create(&x2, bad), Err(MoveError::SiteInvalid(_))));
}

#[test]
fn spanning_trees() {
    let z2 = build_z(2).unwrap();
    assert_eq!((z2.vertices().len(), z2.edges().len()), (3, 6));
    let least = *z2.edges().keys().next().unwrap();
    let t = spanning_tree(&z2, Some(least)).unwrap();
    assert_eq!(t.edges.len(), 2);
    assert!(!t.edges.contains(&least));
    let x2 = build_x(2).unwrap();
    assert!(spanning_tree(&x2, None).unwrap().edges.is_empty());
    assert_eq!(fundamental_group(&x2).unwrap().generators().len(), 2);
    let joined = ShadowPolyhedron::from_parts(
        z2.vertices().iter().copied().chain([9]),
        z2.edges().values().copied().chain(x2.edges().values().map(|e| {
            let mut e = *e;
            e.id += 100;
            e.source.vertex = 9;
            e.target.vertex = 9;
            e
        })),
        [],
        [],
    );
    assert!(matches!(spanning_tree(&joined, None), Err(FundamentalError::Disconnected)));
}

#[test]
fn small_presentations() {
    let x1 = fundamental_group(&build_x(1).unwrap()).unwrap();
    assert_eq!(x1.generators().len(), 1);
    assert_eq!(x1.relators().len(), 1);
    assert_eq!(x1.relators()[0].len(), 3);
    assert_eq!(x1.relators()[0].exponent_sum(0).abs(), 3);
    let b = rank_lower_bound(&build_x(1).unwrap(), false).unwrap();
    assert_eq!(b.h1.torsion.len(), 1);
    assert_eq!(b.bound_sc, 0);
    let id = fundamental_group(&circle([0, 1, 2])).unwrap();
    assert_eq!(abelianization(&id), z_rank(0));
}

#[test]
fn gleam_assignment() {
    let x1 = build_x(1).unwrap().without_gleams();
    assert_eq!(z2_gleams(&x1).unwrap(), vec![0]);
    let zero = BTreeMap::from([(0, Rational64::from_integer(0))]);
    assert!(set_gleams(&x1, &zero).is_ok());
    let half = BTreeMap::from([(0, Rational64::new(1, 2))]);
    assert!(matches!(set_gleams(&x1, &half), Err(GleamError::GleamParity(0))));
    let third = BTreeMap::from([(0, Rational64::new(1, 3))]);
    assert!(matches!(set_gleams(&x1, &third), Err(GleamError::NotHalfInteger(0))));

    let tr = circle([1, 0, 2]);
    let gl2 = z2_gleams(&tr).unwrap();
    let assign: BTreeMap<usize, Rational64> =
        gl2.iter().enumerate().map(|(i, &g)| (i, Rational64::new(g as i64, 2))).collect();
    let ok = set_gleams(&tr, &assign).unwrap();
    assert!(validate(&ok).passed());
    assert!(matches!(set_gleams(&tr, &BTreeMap::new()), Err(GleamError::MissingGleam(_))));
}

#[test]
fn validation_examples() {
    let mut x1 = build_x(1).unwrap();
    x1 = x1.with_caps(BTreeMap::from([(0, RegionCap::Disk { gleam: Some(shadow_core::Gleam::from_doubled(0)) })]));
    assert!(validate(&x1).passed());
    assert!(validate(&build_z(3).unwrap()).passed());
    // a leg used by two edges
    let x2 = build_x(2).unwrap();
    let mut edges: Vec<_> = x2.edges().values().cloned().collect();
    edges[1].source = edges[0].source;
    let broken = ShadowPolyhedron::from_parts(x2.vertices().iter().copied(), edges, [], x2.caps().clone());
    let r = validate(&broken);
    assert!(r.failures().any(|c| c.name == "matching"));
}

#[test]
fn circle_canonical_forms() {
    let f = |m| canonical_form(&circle(m), GleamMode::Ignore).unwrap();
    assert_eq!(f([1, 2, 0]), f([2, 0, 1]));
    assert_eq!(f([1, 0, 2]), f([0, 2, 1]));
    assert_ne!(f([0, 1, 2]), f([1, 0, 2]));
}

#[test]
fn text_and_json_round_trip() {
    let mut pool: Vec<ShadowPolyhedron> =
        enumerate(&CensusFilter::up_to(1), 1, None).unwrap().into_iter().map(|c| c.poly).collect();
    for k in 1..=4 {
        pool.push(build_x_punctured(k).unwrap());
        pool.push(build_z(k).unwrap());
    }
    pool.push(oracle_close(circle([1, 0, 2])));
    for p in pool {
        let t = to_text(&p);
        let q = parse_text(&t).unwrap();
        assert_eq!(q, p);
        assert_eq!(to_text(&q), t);
        assert_eq!(from_json(&to_json(&p)).unwrap(), p);
    }
    assert!(parse_text("# shadow v1\nbogus 1\n").is_err());
}
