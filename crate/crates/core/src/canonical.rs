//! Canonical forms by minimal-labeling search, and explicit relabelings.
//!
//! Once the leg order of one vertex is fixed, the wing maps pin the leg order
//! of every neighbour, so a connected polyhedron has at most 24·n labelings
//! to try.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::polyhedron::{
    wing_labels, Circle, CircleId, Edge, EdgeId, LegRef, Perm3, RegionCap, Segment, ShadowPolyhedron, Sheet,
    StructureError, VertexId, WingMap,
};
use crate::regions::{trace_with, Circuit, Gluing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GleamMode {
    Include,
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("polyhedron is disconnected")]
    Disconnected,
}

const NONE: u32 = u32::MAX;

pub(crate) fn all_perm4() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let mut s = p;
                    s.sort();
                    if s == [0, 1, 2, 3] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn cap_code(cap: Option<&RegionCap>, mode: GleamMode) -> [u32; 3] {
    match cap {
        None => [3, 0, 0],
        Some(RegionCap::PuncturedDisk) => [2, 0, 0],
        Some(RegionCap::Disk { gleam }) => match (gleam, mode) {
            (Some(g), GleamMode::Include) => {
                let u = (g.doubled() as u64) ^ (1 << 63);
                [1, (u >> 32) as u32, u as u32]
            }
            _ => [0, 0, 0],
        },
    }
}

struct Adjacency {
    /// Per dense vertex and leg: partner dense vertex, partner leg, map from
    /// labels here to labels there (indexed by label).
    legs: Vec<[(usize, u8, [u8; 4]); 4]>,
    dense: HashMap<VertexId, usize>,
}

fn adjacency(poly: &ShadowPolyhedron) -> Adjacency {
    let dense: HashMap<VertexId, usize> = poly.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut legs = vec![[(0usize, 0u8, [0u8; 4]); 4]; dense.len()];
    for e in poly.edges().values() {
        let (s, t) = (dense[&e.source.vertex], dense[&e.target.vertex]);
        let mut fwd = [0u8; 4];
        let mut bwd = [0u8; 4];
        for (x, y) in e.map.pairs() {
            fwd[x as usize] = y;
            bwd[y as usize] = x;
        }
        legs[s][e.source.leg as usize] = (t, e.target.leg, fwd);
        legs[t][e.target.leg as usize] = (s, e.source.leg, bwd);
    }
    Adjacency { legs, dense }
}

struct Labeling {
    new_id: Vec<u32>,
    sigma: Vec<[u8; 4]>,
}

/// Runs the labeling from `root` with leg order `sigma0`, appending the graph
/// encoding to `enc`. Returns `None` as soon as the encoding exceeds `bound`.
fn label_from(
    adj: &Adjacency,
    root: usize,
    sigma0: [u8; 4],
    enc: &mut Vec<u32>,
    bound: Option<&[u32]>,
) -> Option<Labeling> {
    let n = adj.legs.len();
    let mut new_id = vec![NONE; n];
    let mut sigma = vec![[0u8; 4]; n];
    let mut order = Vec::with_capacity(n);
    new_id[root] = 0;
    sigma[root] = sigma0;
    order.push(root);
    let mut tight = bound.is_some();
    let push = |enc: &mut Vec<u32>, x: u32, tight: &mut bool| -> bool {
        if *tight {
            let b = bound.unwrap()[enc.len()];
            if x > b {
                return false;
            }
            if x < b {
                *tight = false;
            }
        }
        enc.push(x);
        true
    };
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        let mut inv = [0u8; 4];
        for l in 0..4 {
            inv[sigma[v][l] as usize] = l as u8;
        }
        for big_l in 0..4u8 {
            let l = inv[big_l as usize];
            let (w, lw, m) = adj.legs[v][l as usize];
            if new_id[w] == NONE {
                new_id[w] = order.len() as u32;
                order.push(w);
                let mut others: Vec<u8> = wing_labels(lw).to_vec();
                let sv = sigma[v];
                others.sort_by_key(|&x| {
                    let pre = (0..4u8).find(|&y| y != l && m[y as usize] == x).unwrap();
                    sv[pre as usize]
                });
                let mut s = [0u8; 4];
                s[lw as usize] = 0;
                for (k, &x) in others.iter().enumerate() {
                    s[x as usize] = k as u8 + 1;
                }
                sigma[w] = s;
            }
            if !push(enc, new_id[w], &mut tight) || !push(enc, sigma[w][lw as usize] as u32, &mut tight) {
                return None;
            }
            for y in wing_labels(big_l) {
                let old = inv[y as usize];
                let img = sigma[w][m[old as usize] as usize] as u32;
                if !push(enc, img, &mut tight) {
                    return None;
                }
            }
        }
        i += 1;
    }
    if order.len() != n {
        return None;
    }
    Some(Labeling { new_id, sigma })
}

fn sheet_views(poly: &ShadowPolyhedron, adj: &Adjacency, lab: &Labeling, s: Sheet) -> (u32, u8, u8) {
    let Segment::Edge(e) = s.segment else { unreachable!() };
    let e = &poly.edges()[&e];
    let a = adj.dense[&e.source.vertex];
    let b = adj.dense[&e.target.vertex];
    let y = e.map.image(s.wing).unwrap();
    let va = (lab.new_id[a], lab.sigma[a][e.source.leg as usize], lab.sigma[a][s.wing as usize]);
    let vb = (lab.new_id[b], lab.sigma[b][e.target.leg as usize], lab.sigma[b][y as usize]);
    va.min(vb)
}

fn caps_encoding(
    poly: &ShadowPolyhedron,
    adj: &Adjacency,
    lab: &Labeling,
    circuit_sheets: &[Vec<Sheet>],
    mode: GleamMode,
) -> Vec<u32> {
    let mut keyed: Vec<((u32, u8, u8), [u32; 3])> = circuit_sheets
        .iter()
        .enumerate()
        .map(|(i, sheets)| {
            let key = sheets.iter().map(|&s| sheet_views(poly, adj, lab, s)).min().unwrap();
            (key, cap_code(poly.cap(i), mode))
        })
        .collect();
    keyed.sort();
    keyed.iter().flat_map(|(_, c)| c.iter().copied()).collect()
}

fn to_bytes(words: &[u32]) -> Vec<u8> {
    words.iter().flat_map(|w| w.to_be_bytes()).collect()
}

/// Canonical byte string of a connected polyhedron. Caps are part of the
/// form; gleams are included or ignored according to `mode`.
pub fn canonical_form(poly: &ShadowPolyhedron, mode: GleamMode) -> Result<Vec<u8>, CanonError> {
    let g = Gluing::new(poly)?;
    if !poly.is_connected() {
        return Err(CanonError::Disconnected);
    }
    let circuits = trace_with(&g);
    if poly.vertices().is_empty() {
        let c = poly.circles().values().next().unwrap();
        let mut caps: Vec<(usize, [u32; 3])> =
            circuits.iter().enumerate().map(|(i, cc)| (cc.len(), cap_code(poly.cap(i), mode))).collect();
        caps.sort();
        let mut enc = vec![0, c.monodromy.fixed_points() as u32];
        enc.extend(caps.iter().flat_map(|(l, code)| std::iter::once(*l as u32).chain(code.iter().copied())));
        return Ok(to_bytes(&enc));
    }
    let adj = adjacency(poly);
    let circuit_sheets: Vec<Vec<Sheet>> =
        circuits.iter().map(|c: &Circuit| c.passages().iter().map(|&p| g.sheet(p)).collect()).collect();
    let uniform = poly.caps().len() == circuits.len()
        && circuits.iter().enumerate().all(|(i, _)| cap_code(poly.cap(i), mode) == cap_code(poly.cap(0), mode));
    let mut best: Option<Vec<u32>> = None;
    let mut enc = Vec::new();
    let n = adj.legs.len();
    let header = [n as u32, circuits.len() as u32];
    for root in 0..n {
        for sigma0 in all_perm4() {
            enc.clear();
            enc.extend_from_slice(&header);
            let graph_bound = best.as_deref();
            let Some(lab) = label_from(&adj, root, sigma0, &mut enc, graph_bound) else {
                continue;
            };
            if uniform {
                enc.extend(cap_code(poly.cap(0), mode));
            } else {
                enc.extend(caps_encoding(poly, &adj, &lab, &circuit_sheets, mode));
            }
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc.clone());
            }
        }
    }
    Ok(to_bytes(&best.unwrap()))
}

pub fn isomorphic(p: &ShadowPolyhedron, q: &ShadowPolyhedron, mode: GleamMode) -> Result<bool, CanonError> {
    Ok(canonical_form(p, mode)? == canonical_form(q, mode)?)
}

/// An explicit relabeling of every id and label of a polyhedron.
#[derive(Clone, Debug, Default)]
pub struct Relabeling {
    pub vertex: BTreeMap<VertexId, VertexId>,
    /// Old leg index to new leg index, per old vertex.
    pub legs: BTreeMap<VertexId, [u8; 4]>,
    pub edge: BTreeMap<EdgeId, EdgeId>,
    /// Edges whose stored direction is reversed.
    pub flip: BTreeSet<EdgeId>,
    pub circle: BTreeMap<CircleId, CircleId>,
    pub circle_labels: BTreeMap<CircleId, Perm3>,
    pub circle_reverse: BTreeSet<CircleId>,
}

impl Relabeling {
    fn v(&self, v: VertexId) -> VertexId {
        self.vertex.get(&v).copied().unwrap_or(v)
    }

    fn sigma(&self, v: VertexId) -> [u8; 4] {
        self.legs.get(&v).copied().unwrap_or([0, 1, 2, 3])
    }

    fn leg(&self, l: LegRef) -> LegRef {
        LegRef::new(self.v(l.vertex), self.sigma(l.vertex)[l.leg as usize])
    }

    fn pi(&self, c: CircleId) -> Perm3 {
        self.circle_labels.get(&c).copied().unwrap_or(Perm3::IDENTITY)
    }

    fn edge_id(&self, e: EdgeId) -> EdgeId {
        self.edge.get(&e).copied().unwrap_or(e)
    }

    fn circle_id(&self, c: CircleId) -> CircleId {
        self.circle.get(&c).copied().unwrap_or(c)
    }

    /// Image of a sheet of `poly` in the relabeled polyhedron.
    pub fn sheet(&self, poly: &ShadowPolyhedron, s: Sheet) -> Sheet {
        match s.segment {
            Segment::Edge(id) => {
                let e = &poly.edges()[&id];
                let wing = if self.flip.contains(&id) {
                    self.sigma(e.target.vertex)[e.map.image(s.wing).unwrap() as usize]
                } else {
                    self.sigma(e.source.vertex)[s.wing as usize]
                };
                Sheet { segment: Segment::Edge(self.edge_id(id)), wing }
            }
            Segment::Circle(id) => {
                let mu = poly.circles()[&id].monodromy;
                let x = if self.circle_reverse.contains(&id) { mu.apply(s.wing) } else { s.wing };
                Sheet { segment: Segment::Circle(self.circle_id(id)), wing: self.pi(id).apply(x) }
            }
        }
    }

    /// Applies the relabeling; caps follow their circuits.
    pub fn apply(&self, poly: &ShadowPolyhedron) -> Result<ShadowPolyhedron, StructureError> {
        let vertices: Vec<VertexId> = poly.vertices().iter().map(|&v| self.v(v)).collect();
        let edges: Vec<Edge> = poly
            .edges()
            .values()
            .map(|e| {
                let (s, t) = (self.leg(e.source), self.leg(e.target));
                let (ss, st) = (self.sigma(e.source.vertex), self.sigma(e.target.vertex));
                let pairs = e.map.pairs().map(|(x, y)| (ss[x as usize], st[y as usize]));
                let map = WingMap::from_pairs(pairs);
                let id = self.edge_id(e.id);
                if self.flip.contains(&e.id) {
                    Edge { id, source: t, target: s, map: map.inverse() }
                } else {
                    Edge { id, source: s, target: t, map }
                }
            })
            .collect();
        let circles: Vec<Circle> = poly
            .circles()
            .values()
            .map(|c| {
                let pi = self.pi(c.id);
                let mu = if self.circle_reverse.contains(&c.id) { c.monodromy.inverse() } else { c.monodromy };
                let conj = pi.inverse().compose(&mu).compose(&pi);
                Circle { id: self.circle_id(c.id), monodromy: conj }
            })
            .collect();
        let bare = ShadowPolyhedron::from_parts(vertices, edges, circles, []);
        let transfer = transfer_circuits(poly, &bare, |s| self.sheet(poly, s))?;
        let caps = poly.caps().iter().filter_map(|(&i, &c)| transfer.get(&i).map(|&j| (j, c))).collect();
        Ok(bare.with_caps(caps))
    }
}

/// Maps each circuit of `old` to the circuit of `new` containing the image of
/// its first sheet.
pub(crate) fn transfer_circuits(
    old: &ShadowPolyhedron,
    new: &ShadowPolyhedron,
    sheet_map: impl Fn(Sheet) -> Sheet,
) -> Result<BTreeMap<usize, usize>, StructureError> {
    let go = Gluing::new(old)?;
    let gn = Gluing::new(new)?;
    let old_c = trace_with(&go);
    let new_c = trace_with(&gn);
    let index = crate::regions::sheet_index(&gn, &new_c);
    Ok(old_c.iter().enumerate().map(|(i, c)| (i, index[&sheet_map(go.sheet(c.passages()[0]))])).collect())
}
