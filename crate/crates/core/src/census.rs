//! Exhaustive census of connected special polyhedra with few true vertices.
//!
//! Polyhedra are generated directly in breadth-first normal labeling: legs
//! are filled in (vertex, leg) order, and an unmatched leg either opens the
//! next vertex through its leg 0 with the order-preserving wing map, or is
//! glued to another unmatched leg with any of the six wing maps. Every
//! connected polyhedron has such a labeling (the one the canonical form
//! search produces from any root), so deduplicating by canonical form gives
//! exactly one representative per class.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canonical_form, GleamMode};
use crate::format::to_text;
use crate::group::claims::{verify_claims, ClaimsReport};
use crate::group::obstruction::{choose_line, free_obstruction, Verdict};
use crate::group::presentation::fundamental_group;
use crate::group::snf::abelianization;
use crate::polyhedron::{wing_labels, Circle, Edge, LegRef, Perm3, RegionCap, Segment, ShadowPolyhedron, WingMap};
use crate::regions::{euler_characteristic, trace_regions, z2_gleams};

pub const DEFAULT_CEILING: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusFilter {
    pub max_vertices: usize,
    pub require_special: bool,
    pub min_regions: usize,
    pub connected_quartic_only: bool,
}

impl CensusFilter {
    pub fn up_to(max_vertices: usize) -> Self {
        CensusFilter { max_vertices, require_special: true, min_regions: 1, connected_quartic_only: false }
    }

    pub fn accepts(&self, p: &ShadowPolyhedron) -> bool {
        p.complexity() <= self.max_vertices
            && (!self.require_special || p.is_special())
            && p.region_count() >= self.min_regions
            && (!self.connected_quartic_only || (p.is_quartic_graph() && p.singular_set_connected()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("{requested} vertices exceeds the census ceiling {ceiling}")]
    AboveCeiling { requested: usize, ceiling: usize },
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusClass {
    pub form: Vec<u8>,
    pub poly: ShadowPolyhedron,
}

/// Caps every circuit with an ungleamed disk.
pub fn close_up(p: ShadowPolyhedron) -> ShadowPolyhedron {
    let regions = trace_regions(&p).expect("generated gluing is well formed").len();
    p.with_caps((0..regions).map(|i| (i, RegionCap::disk())).collect())
}

/// The three circle classes: identity, transposition, three-cycle.
pub fn circle_classes() -> Vec<ShadowPolyhedron> {
    [[0, 1, 2], [1, 0, 2], [1, 2, 0]]
        .into_iter()
        .map(|m| close_up(ShadowPolyhedron::from_parts([], [], [Circle { id: 0, monodromy: Perm3::new(m) }], [])))
        .collect()
}

#[derive(Clone)]
struct Partial {
    n: u32,
    vertices: u32,
    matched: Vec<[bool; 4]>,
    edges: Vec<Edge>,
}

impl Partial {
    fn new(n: u32) -> Self {
        Partial { n, vertices: 1, matched: vec![[false; 4]], edges: Vec::new() }
    }

    fn first_free(&self) -> Option<LegRef> {
        (0..self.vertices)
            .flat_map(|v| (0..4u8).map(move |l| LegRef::new(v, l)))
            .find(|r| !self.matched[r.vertex as usize][r.leg as usize])
    }

    fn glue(&self, a: LegRef, b: LegRef, map: WingMap) -> Partial {
        let mut next = self.clone();
        if b.vertex == next.vertices {
            next.vertices += 1;
            next.matched.push([false; 4]);
        }
        next.matched[a.vertex as usize][a.leg as usize] = true;
        next.matched[b.vertex as usize][b.leg as usize] = true;
        next.edges.push(Edge { id: next.edges.len() as u32, source: a, target: b, map });
        next
    }

    /// Every extension at the first unmatched leg.
    fn children(&self) -> Vec<Partial> {
        let Some(a) = self.first_free() else { return Vec::new() };
        let mut out = Vec::new();
        let from = wing_labels(a.leg);
        if self.vertices < self.n {
            out.push(self.glue(a, LegRef::new(self.vertices, 0), WingMap::from_lists(from, [1, 2, 3])));
        }
        for w in 0..self.vertices {
            for l in 0..4u8 {
                let b = LegRef::new(w, l);
                if b <= a || self.matched[w as usize][l as usize] {
                    continue;
                }
                for p in Perm3::all() {
                    let to = wing_labels(l);
                    let img = p.images().map(|i| to[i as usize]);
                    out.push(self.glue(a, b, WingMap::from_lists(from, img)));
                }
            }
        }
        out
    }

    fn complete(&self) -> Option<ShadowPolyhedron> {
        (self.first_free().is_none() && self.vertices == self.n)
            .then(|| close_up(ShadowPolyhedron::from_parts(0..self.n, self.edges.iter().cloned(), [], [])))
    }
}

fn walk(p: &Partial, out: &mut Vec<ShadowPolyhedron>) {
    if let Some(done) = p.complete() {
        out.push(done);
        return;
    }
    for c in p.children() {
        walk(&c, out);
    }
}

/// Every labeled polyhedron in breadth-first normal form with `n ≥ 1` vertices
/// (with repetitions across classes).
pub fn generate(n: usize) -> Vec<ShadowPolyhedron> {
    let mut out = Vec::new();
    if n > 0 {
        walk(&Partial::new(n as u32), &mut out);
    }
    out
}

/// Partial states a few decisions deep, in a fixed order; the units of work.
fn frontier(n: usize, depth: usize) -> Vec<Partial> {
    let mut level = vec![Partial::new(n as u32)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &level {
            if p.first_free().is_none() {
                next.push(p.clone());
            } else {
                next.extend(p.children());
            }
        }
        level = next;
    }
    level
}

fn dedup_unit(p: &Partial) -> BTreeMap<Vec<u8>, ShadowPolyhedron> {
    let mut found = Vec::new();
    walk(p, &mut found);
    let mut out = BTreeMap::new();
    for q in found {
        let form = canonical_form(&q, GleamMode::Ignore).expect("generated polyhedra are connected");
        out.entry(form).or_insert(q);
    }
    out
}

/// Isomorphism classes with exactly `n` vertices, sorted by canonical form.
/// The representative of a class is the first one met in generation order,
/// so the result does not depend on `workers`.
pub fn classes(n: usize, workers: usize) -> Result<Vec<CensusClass>, CensusError> {
    if n == 0 {
        let mut v: Vec<CensusClass> = circle_classes()
            .into_iter()
            .map(|p| CensusClass { form: canonical_form(&p, GleamMode::Ignore).unwrap(), poly: p })
            .collect();
        v.sort_by(|a, b| a.form.cmp(&b.form));
        return Ok(v);
    }
    let units = frontier(n, 2 * n.min(3));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    let parts: Vec<BTreeMap<Vec<u8>, ShadowPolyhedron>> = pool.install(|| units.par_iter().map(dedup_unit).collect());
    let mut merged: BTreeMap<Vec<u8>, ShadowPolyhedron> = BTreeMap::new();
    for part in parts {
        for (form, p) in part {
            merged.entry(form).or_insert(p);
        }
    }
    Ok(merged.into_iter().map(|(form, poly)| CensusClass { form, poly }).collect())
}

/// All classes passing `filter`, sorted by canonical form. Refuses to go
/// above `ceiling` vertices (default [`DEFAULT_CEILING`]).
pub fn enumerate(
    filter: &CensusFilter,
    workers: usize,
    ceiling: Option<usize>,
) -> Result<Vec<CensusClass>, CensusError> {
    let ceiling = ceiling.unwrap_or(DEFAULT_CEILING);
    if filter.max_vertices > ceiling {
        return Err(CensusError::AboveCeiling { requested: filter.max_vertices, ceiling });
    }
    let mut all = Vec::new();
    for n in 0..=filter.max_vertices {
        all.extend(classes(n, workers)?.into_iter().filter(|c| filter.accepts(&c.poly)));
    }
    all.sort_by(|a, b| a.form.cmp(&b.form));
    Ok(all)
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Whether some triple line carries a region exactly once.
pub fn has_simple_line(p: &ShadowPolyhedron) -> bool {
    matches!(choose_line(p), Ok(Some(_)))
}

/// Triple lines on which no region passes exactly once.
pub fn lines_without_simple_region(p: &ShadowPolyhedron) -> Vec<u32> {
    let Ok(circuits) = trace_regions(p) else { return Vec::new() };
    p.edges()
        .keys()
        .copied()
        .filter(|&e| {
            circuits.iter().all(|c| c.passages().iter().filter(|q| q.segment == Segment::Edge(e)).count() != 1)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionSummary {
    pub rank: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub index: usize,
    pub form: String,
    pub c: usize,
    pub regions: usize,
    pub chi: i64,
    pub gl2: Vec<u8>,
    pub h1: String,
    pub h1_rank: usize,
    pub torsion_free: bool,
    /// Torsion-free H1 of rank at least max(c, 1): π1 could a priori be free
    /// of rank ≥ c.
    pub free_screen: bool,
    pub simple_line: bool,
    pub claims: ClaimsReport,
    pub obstruction: ObstructionSummary,
    pub shadow: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Aggregate {
    pub classes: usize,
    pub by_vertices: BTreeMap<usize, usize>,
    /// Classes meeting the claims' hypotheses, and how many pass all three.
    pub claims_eligible: usize,
    pub claims_passed: usize,
    /// Eligible classes (at least two regions) lacking a simple triple line.
    pub simple_line_missing: usize,
    pub free_screen_passed: usize,
    pub free_screen_certified: usize,
    pub verdicts: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub filter: CensusFilter,
    pub classes: Vec<ClassReport>,
    pub aggregate: Aggregate,
}

fn verdict_key(v: &Verdict) -> String {
    match v {
        Verdict::ContradictionCertified => "ContradictionCertified".into(),
        Verdict::HypothesisUnmet(r) => format!("HypothesisUnmet({r})"),
        Verdict::Inconclusive(r) => format!("Inconclusive({r})"),
    }
}

pub fn class_report(index: usize, class: &CensusClass) -> ClassReport {
    let p = &class.poly;
    let pres = fundamental_group(p).expect("census classes are connected");
    let h1 = abelianization(&pres);
    let rank = h1.free_rank;
    let obstruction = match free_obstruction(p, rank) {
        Ok(c) => c.verdict,
        Err(e) => Verdict::Inconclusive(e.to_string()),
    };
    ClassReport {
        index,
        form: hex(&class.form),
        c: p.complexity(),
        regions: p.region_count(),
        chi: euler_characteristic(p),
        gl2: z2_gleams(p).expect("census classes are well formed"),
        free_screen: h1.is_torsion_free() && rank >= p.complexity().max(1),
        h1_rank: rank,
        torsion_free: h1.is_torsion_free(),
        h1: h1.to_string(),
        simple_line: has_simple_line(p),
        claims: verify_claims(p, &pres),
        obstruction: ObstructionSummary { rank, verdict: obstruction },
        shadow: to_text(p),
    }
}

pub fn census_report(
    filter: &CensusFilter,
    workers: usize,
    ceiling: Option<usize>,
) -> Result<CensusReport, CensusError> {
    let classes = enumerate(filter, workers, ceiling)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    let reports: Vec<ClassReport> =
        pool.install(|| classes.par_iter().enumerate().map(|(i, c)| class_report(i, c)).collect());
    let mut agg = Aggregate { classes: reports.len(), ..Default::default() };
    for r in &reports {
        *agg.by_vertices.entry(r.c).or_default() += 1;
        if r.claims.hypotheses.all() {
            agg.claims_eligible += 1;
            agg.claims_passed += r.claims.all_hold() as usize;
        }
        if r.regions >= 2 && r.c >= 1 && !r.simple_line {
            agg.simple_line_missing += 1;
        }
        if r.free_screen {
            agg.free_screen_passed += 1;
            agg.free_screen_certified += (r.obstruction.verdict == Verdict::ContradictionCertified) as usize;
        }
        *agg.verdicts.entry(verdict_key(&r.obstruction.verdict)).or_default() += 1;
    }
    Ok(CensusReport { filter: filter.clone(), classes: reports, aggregate: agg })
}
