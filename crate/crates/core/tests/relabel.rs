mod support;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shadow_core::census::{enumerate, CensusFilter};
use shadow_core::families::{build_x, build_z};
use shadow_core::regions::{sheet_index, Gluing};
use shadow_core::{
    canonical_form, euler_characteristic, isomorphic, trace_regions, z2_gleams, GleamMode, ShadowPolyhedron, Sheet,
};
use support::random_relabeling;

fn owners(p: &ShadowPolyhedron) -> HashMap<Sheet, usize> {
    let g = Gluing::new(p).unwrap();
    sheet_index(&g, &trace_regions(p).unwrap())
}

fn sorted(mut v: Vec<u8>) -> Vec<u8> {
    v.sort();
    v
}

#[test]
fn invariants_survive_random_relabeling() {
    let mut pool: Vec<ShadowPolyhedron> =
        enumerate(&CensusFilter::up_to(2), 1, None).unwrap().into_iter().map(|c| c.poly).collect();
    for k in 1..=3 {
        pool.push(build_x(k).unwrap());
        pool.push(build_z(k).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let p = &pool[rng.gen_range(0..pool.len())];
        let r = random_relabeling(p, &mut rng);
        let q = r.apply(p).unwrap();
        for mode in [GleamMode::Ignore, GleamMode::Include] {
            assert_eq!(canonical_form(p, mode).unwrap(), canonical_form(&q, mode).unwrap());
        }
        assert!(isomorphic(p, &q, GleamMode::Include).unwrap());
        assert_eq!(euler_characteristic(p), euler_characteristic(&q));
        let (gp, gq) = (z2_gleams(p).unwrap(), z2_gleams(&q).unwrap());
        assert_eq!(sorted(gp.clone()), sorted(gq.clone()));
        // sheet by sheet, the image lies in a region with the same parity and cap
        let (op, oq) = (owners(p), owners(&q));
        for (&s, &i) in &op {
            let j = oq[&r.sheet(p, s)];
            assert_eq!(gp[i], gq[j]);
            assert_eq!(p.caps()[&i], q.caps()[&j]);
        }
    }
}

#[test]
fn gleams_distinguish_in_include_mode_only() {
    let z = build_z(2).unwrap();
    let bare = z.without_gleams();
    assert!(isomorphic(&z, &bare, GleamMode::Ignore).unwrap());
    assert!(!isomorphic(&z, &bare, GleamMode::Include).unwrap());
}
