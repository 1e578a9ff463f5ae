//! Word-combinatorial properties of presentations read off special polyhedra:
//! every generator occurs three times in total, relators are cyclically
//! reduced, and distinct relators share no cyclic subword of length ≥ 2
//! (nor its inverse).

use std::collections::HashSet;

use serde::Serialize;

use super::presentation::Presentation;
use super::word::{Letter, Word};
use crate::polyhedron::ShadowPolyhedron;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: u8,
    pub holds: bool,
    pub violations: Vec<String>,
}

impl ClaimReport {
    fn new(claim: u8, violations: Vec<String>) -> Self {
        ClaimReport { claim, holds: violations.is_empty(), violations }
    }
}

/// Whether the hypotheses under which the claims are proved hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimHypotheses {
    pub special: bool,
    pub connected_quartic: bool,
    pub regions_at_least_two: bool,
    pub vertices_at_least_two: bool,
}

impl ClaimHypotheses {
    pub fn of(poly: &ShadowPolyhedron) -> Self {
        ClaimHypotheses {
            special: poly.is_special(),
            connected_quartic: poly.is_quartic_graph() && poly.singular_set_connected(),
            regions_at_least_two: poly.region_count() >= 2,
            vertices_at_least_two: poly.complexity() >= 2,
        }
    }

    pub fn all(&self) -> bool {
        self.special && self.connected_quartic && self.regions_at_least_two && self.vertices_at_least_two
    }
}

pub fn verify_claim1(pres: &Presentation) -> ClaimReport {
    let mut v = Vec::new();
    for (g, name) in pres.generators().iter().enumerate() {
        let n: usize = pres.relators().iter().map(|r| r.occurrences(g)).sum();
        if n != 3 {
            v.push(format!("{name} occurs {n} times"));
        }
    }
    ClaimReport::new(1, v)
}

pub fn verify_claim2(pres: &Presentation) -> ClaimReport {
    let mut v = Vec::new();
    for (j, r) in pres.relators().iter().enumerate() {
        if !r.clone().with_cyclic(true).is_reduced() {
            v.push(format!("relator {j} ({}) is not cyclically reduced", pres.relator_display(j)));
        }
    }
    ClaimReport::new(2, v)
}

/// The word read periodically far enough to contain every cyclic subword of
/// length `len`.
fn periodic(w: &[Letter], len: usize) -> Vec<Letter> {
    w.iter().cycle().take(w.len() + len).copied().collect()
}

/// First cyclic subword of `r` of length 2..=max(2, |r|) that occurs cyclically
/// in `s` or in `s⁻¹`.
pub fn shared_subword(r: &Word, s: &Word) -> Option<Vec<Letter>> {
    if r.is_empty() || s.is_empty() {
        return None;
    }
    let s_inv = s.inverse();
    for len in 2..=r.len().max(2) {
        let sp = periodic(s.letters(), len);
        let sip = periodic(s_inv.letters(), len);
        let mut pool: HashSet<&[Letter]> = HashSet::new();
        for k in 0..s.len() {
            pool.insert(&sp[k..k + len]);
            pool.insert(&sip[k..k + len]);
        }
        let rp = periodic(r.letters(), len);
        for k in 0..r.len() {
            if pool.contains(&rp[k..k + len]) {
                return Some(rp[k..k + len].to_vec());
            }
        }
    }
    None
}

pub fn verify_claim3(pres: &Presentation) -> ClaimReport {
    let rels = pres.relators();
    let mut v = Vec::new();
    for (j, r) in rels.iter().enumerate() {
        for (jj, s) in rels.iter().enumerate() {
            if j == jj {
                continue;
            }
            if let Some(w) = shared_subword(r, s) {
                let shown = super::word::Display(&Word::linear(w), pres.generators()).to_string();
                v.push(format!("relators {j} and {jj} share {shown}"));
            }
        }
    }
    ClaimReport::new(3, v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub hypotheses: ClaimHypotheses,
    pub claims: [ClaimReport; 3],
}

impl ClaimsReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }
}

pub fn verify_claims(poly: &ShadowPolyhedron, pres: &Presentation) -> ClaimsReport {
    ClaimsReport {
        hypotheses: ClaimHypotheses::of(poly),
        claims: [verify_claim1(pres), verify_claim2(pres), verify_claim3(pres)],
    }
}
