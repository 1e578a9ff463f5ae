//! Puncture, vertex-creation and boundary-disposal.
//!
//! Both creation moves splice a small local gadget into one segment of the
//! singular set. The three sheets along the segment enter the gadget at an
//! entry leg and leave it at an exit leg; outside the gadget nothing changes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use thiserror::Error;

use crate::canonical::transfer_circuits;
use crate::polyhedron::{
    wing_labels, Edge, Gleam, LegRef, RegionCap, Segment, ShadowPolyhedron, Sheet, StructureError, WingMap,
};
use crate::regions::{sheet_index, trace_with, z2_gleam_of, Gluing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("no circuit with index {0}")]
    UnknownCircuit(usize),
    #[error("region {0} is not a disk")]
    NotADisk(usize),
    #[error("vertex creation needs a special polyhedron")]
    NotSpecial,
    #[error("invalid site: {0}")]
    SiteInvalid(String),
    #[error("polyhedron has no boundary")]
    NoBoundary,
    #[error("polyhedron has {0} boundary circles; exactly one is required")]
    MultipleBoundaryCircles(usize),
    #[error("singular set is empty")]
    EmptySingularSet,
}

/// Replaces the disk cap of `circuit` by a punctured disk.
pub fn puncture(poly: &ShadowPolyhedron, circuit: usize) -> Result<ShadowPolyhedron, MoveError> {
    let mut caps = poly.caps().clone();
    match caps.get_mut(&circuit) {
        None => Err(MoveError::UnknownCircuit(circuit)),
        Some(RegionCap::PuncturedDisk) => Err(MoveError::NotADisk(circuit)),
        Some(c) => {
            *c = RegionCap::PuncturedDisk;
            Ok(poly.with_caps(caps))
        }
    }
}

/// Local rewiring spliced into a segment. Vertices are numbered locally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub vertices: u32,
    pub edges: Vec<(LegRef, LegRef, WingMap)>,
    pub entry: LegRef,
    pub exit: LegRef,
    /// Label at the entry leg carried by sheet t.
    pub entry_labels: [u8; 3],
    /// Label at the exit leg carried by sheet t.
    pub exit_labels: [u8; 3],
}

/// How the regions run through a gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTrace {
    /// Exit sheet reached by each entering sheet.
    pub exits: [usize; 3],
    /// Internal edges crossed by each through path, as (edge index, forward).
    pub paths: [Vec<(usize, bool)>; 3],
    /// Closed circuits that stay inside the gadget.
    pub closed: Vec<Vec<(usize, bool)>>,
    /// Whether each through path swaps the order of its complementary sheets
    /// relative to the segment it replaces.
    pub flips: [bool; 3],
}

impl Gadget {
    fn leg_owner(&self, leg: LegRef) -> Option<(usize, bool)> {
        self.edges.iter().enumerate().find_map(|(k, (s, t, _))| {
            if *s == leg {
                Some((k, true))
            } else if *t == leg {
                Some((k, false))
            } else {
                None
            }
        })
    }

    /// Follows every region through the gadget; `None` if some path leaves
    /// through the entry leg or never terminates.
    pub fn trace(&self) -> Option<GadgetTrace> {
        let mut used: BTreeSet<(u32, u8, u8)> = BTreeSet::new();
        let corner = |v: u32, a: u8, b: u8| (v, a.min(b), a.max(b));
        let limit = 4 * self.edges.len() + 8;
        let mut exits = [0usize; 3];
        let mut paths: [Vec<(usize, bool)>; 3] = Default::default();
        let mut flips = [false; 3];
        for t in 0..3 {
            // Arrival at a vertex through `leg` with region label `label`, plus the
            // ordered complementary pair.
            let mut leg = self.entry;
            let mut label = self.entry_labels[t];
            let others: Vec<usize> = (0..3).filter(|&s| s != t).collect();
            let mut pair = (self.entry_labels[others[0]], self.entry_labels[others[1]]);
            let mut steps = 0;
            loop {
                steps += 1;
                if steps > limit {
                    return None;
                }
                if !used.insert(corner(leg.vertex, leg.leg, label)) {
                    return None;
                }
                let out = LegRef::new(leg.vertex, label);
                let carried = leg.leg;
                if out == self.exit {
                    let s = self.exit_labels.iter().position(|&x| x == carried)?;
                    exits[t] = s;
                    let o: Vec<usize> = (0..3).filter(|&r| r != s).collect();
                    let expect = (self.exit_labels[o[0]], self.exit_labels[o[1]]);
                    flips[t] = pair != expect;
                    break;
                }
                if out == self.entry {
                    return None;
                }
                let (k, fwd) = self.leg_owner(out)?;
                let (s, tg, m) = self.edges[k];
                paths[t].push((k, fwd));
                let (arrive, y, p) = if fwd {
                    (tg, m.image(carried)?, (m.image(pair.0)?, m.image(pair.1)?))
                } else {
                    (s, m.preimage(carried)?, (m.preimage(pair.0)?, m.preimage(pair.1)?))
                };
                leg = arrive;
                label = y;
                pair = p;
            }
        }
        let mut closed = Vec::new();
        for v in 0..self.vertices {
            for a in 0..4u8 {
                for b in (a + 1)..4u8 {
                    if used.contains(&(v, a, b)) {
                        continue;
                    }
                    let mut word = Vec::new();
                    let (mut leg, mut label) = (LegRef::new(v, a), b);
                    loop {
                        if !used.insert(corner(leg.vertex, leg.leg, label)) {
                            break;
                        }
                        let out = LegRef::new(leg.vertex, label);
                        let (k, fwd) = self.leg_owner(out)?;
                        let (s, tg, m) = self.edges[k];
                        word.push((k, fwd));
                        let carried = leg.leg;
                        if fwd {
                            leg = tg;
                            label = m.image(carried)?;
                        } else {
                            leg = s;
                            label = m.preimage(carried)?;
                        }
                    }
                    closed.push(word);
                }
            }
        }
        Some(GadgetTrace { exits, paths, closed, flips })
    }
}

fn perms3<T: Copy>(items: [T; 3]) -> [[T; 3]; 6] {
    let [a, b, c] = items;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// Every vertex-creation wiring: one new vertex on the segment (entry leg 0,
/// exit leg 1) with a loop from leg 2 to leg 3, such that every sheet comes out
/// where it went in and no region closes up inside the gadget. Ordered by
/// (loop map, entry labels, exit labels).
pub fn vertex_creation_configs() -> &'static [Gadget] {
    static CONFIGS: OnceLock<Vec<Gadget>> = OnceLock::new();
    CONFIGS.get_or_init(|| {
        let mut out = Vec::new();
        for img in perms3(wing_labels(3)) {
            let map = WingMap::from_lists(wing_labels(2), img);
            for entry_labels in perms3(wing_labels(0)) {
                for exit_labels in perms3(wing_labels(1)) {
                    let g = Gadget {
                        vertices: 1,
                        edges: vec![(LegRef::new(0, 2), LegRef::new(0, 3), map)],
                        entry: LegRef::new(0, 0),
                        exit: LegRef::new(0, 1),
                        entry_labels,
                        exit_labels,
                    };
                    if let Some(tr) = g.trace() {
                        if tr.exits == [0, 1, 2] && tr.closed.is_empty() {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out
    })
}

/// The boundary-disposal wiring. Sheet 0 is the boundary region's sheet at the
/// site, sheets 1 and 2 are the other two. Two new vertices u (0) and v (1):
/// sheet 1 passes straight through u, sheet 0 runs around a bigon through v,
/// sheet 2 winds around v's loop, and the loop bounds the new monogon disk.
pub fn disposal_gadget() -> Gadget {
    Gadget {
        vertices: 2,
        edges: vec![
            (LegRef::new(0, 2), LegRef::new(1, 0), WingMap::from_pairs([(0, 1), (1, 2), (3, 3)])),
            (LegRef::new(0, 3), LegRef::new(1, 1), WingMap::from_pairs([(0, 2), (1, 0), (2, 3)])),
            (LegRef::new(1, 2), LegRef::new(1, 3), WingMap::from_pairs([(0, 0), (1, 1), (3, 2)])),
        ],
        entry: LegRef::new(0, 0),
        exit: LegRef::new(0, 1),
        entry_labels: [2, 1, 3],
        exit_labels: [3, 0, 2],
    }
}

/// Doubled gleam change of the old region owning each sheet at the site.
const DISPOSAL_DELTA: [i64; 3] = [0, 1, -1];

/// Splices `gadget` into `segment`; `names[t]` is the segment's label (source
/// side, or circle label) of sheet t. The old segment's sheets map to sheets
/// on the edge entering the gadget.
fn splice(
    poly: &ShadowPolyhedron,
    segment: Segment,
    names: [u8; 3],
    gadget: &Gadget,
) -> Result<(ShadowPolyhedron, impl Fn(Sheet) -> Sheet), MoveError> {
    let base_v = poly.next_vertex_id();
    let mut next_e = poly.next_edge_id();
    let local = |l: LegRef| LegRef::new(base_v + l.vertex, l.leg);
    let entry = local(gadget.entry);
    let exit = local(gadget.exit);
    let mut edges: Vec<Edge> = Vec::new();
    let mut circles: Vec<_> = poly.circles().values().copied().collect();
    let bridge_id = match segment {
        Segment::Edge(id) => {
            let e = *poly.edge(id).ok_or_else(|| MoveError::SiteInvalid(format!("no edge {id}")))?;
            let into = WingMap::from_lists(names, gadget.entry_labels);
            let out_to = names.map(|x| e.map.image(x).unwrap());
            let out = WingMap::from_lists(gadget.exit_labels, out_to);
            edges.extend(poly.edges().values().filter(|x| x.id != id).copied());
            edges.push(Edge { id, source: e.source, target: entry, map: into });
            edges.push(Edge { id: next_e, source: exit, target: e.target, map: out });
            None
        }
        Segment::Circle(id) => {
            let c = *poly.circle(id).ok_or_else(|| MoveError::SiteInvalid(format!("no circle {id}")))?;
            circles.retain(|x| x.id != id);
            let to: [u8; 3] = std::array::from_fn(|t| {
                let y = c.monodromy.apply(names[t]);
                gadget.entry_labels[names.iter().position(|&x| x == y).unwrap()]
            });
            edges.extend(poly.edges().values().copied());
            edges.push(Edge {
                id: next_e,
                source: exit,
                target: entry,
                map: WingMap::from_lists(gadget.exit_labels, to),
            });
            Some(next_e)
        }
    };
    next_e += 1;
    for &(s, t, m) in &gadget.edges {
        edges.push(Edge { id: next_e, source: local(s), target: local(t), map: m });
        next_e += 1;
    }
    let vertices = poly.vertices().iter().copied().chain((0..gadget.vertices).map(|k| base_v + k));
    let new = ShadowPolyhedron::from_parts(vertices, edges, circles, []);
    new.check_structure()?;
    let exit_labels = gadget.exit_labels;
    let map = move |s: Sheet| match (s.segment, bridge_id) {
        (Segment::Circle(c), Some(b)) if segment == Segment::Circle(c) => {
            let t = names.iter().position(|&x| x == s.wing).unwrap();
            Sheet { segment: Segment::Edge(b), wing: exit_labels[t] }
        }
        _ => s,
    };
    Ok((new, map))
}

/// A vertex-creation site: a segment and an index into
/// [`vertex_creation_configs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexSite {
    Default,
    At { segment: Segment, config: usize },
}

/// Adds one true vertex on a triple line or circle while keeping the region
/// count. Gleams of the regions through the site are cleared.
pub fn vertex_create(poly: &ShadowPolyhedron, site: VertexSite) -> Result<ShadowPolyhedron, MoveError> {
    poly.check_structure()?;
    if !poly.is_special() {
        return Err(MoveError::NotSpecial);
    }
    let (segment, config) = match site {
        VertexSite::Default => (*poly.segments().first().ok_or(MoveError::EmptySingularSet)?, 0),
        VertexSite::At { segment, config } => (segment, config),
    };
    let gadget =
        vertex_creation_configs().get(config).ok_or_else(|| MoveError::SiteInvalid(format!("no wiring {config}")))?;
    let names = poly.segment_wings(segment).ok_or_else(|| MoveError::SiteInvalid(format!("no segment {segment}")))?;
    let (spliced, map) = splice(poly, segment, names, gadget)?;
    let transfer = transfer_circuits(poly, &spliced, &map)?;
    let g = Gluing::new(poly)?;
    let circuits = trace_with(&g);
    let owners = sheet_index(&g, &circuits);
    let touched: BTreeSet<usize> = names.iter().map(|&w| owners[&Sheet { segment, wing: w }]).collect();
    let new_count = trace_with(&Gluing::new(&spliced)?).len();
    assert_eq!(new_count, circuits.len(), "vertex creation changed the region count");
    let caps = poly
        .caps()
        .iter()
        .map(|(&i, &c)| {
            let c = if touched.contains(&i) { RegionCap::disk() } else { c };
            (transfer[&i], c)
        })
        .collect();
    Ok(spliced.with_caps(caps))
}

/// Where the boundary region is pushed onto the singular set: one of its
/// sheets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisposalSite {
    Default,
    At(Sheet),
}

/// Removes the single boundary circle, adding two true vertices and one new
/// disk region. The boundary region becomes a disk with gleam gl2/2, the new
/// monogon gets gleam 0, and the regions owning the two other sheets at the
/// site shift by +1/2 and -1/2.
pub fn boundary_dispose(poly: &ShadowPolyhedron, site: DisposalSite) -> Result<ShadowPolyhedron, MoveError> {
    let g = Gluing::new(poly)?;
    let boundary: Vec<usize> = poly.caps().iter().filter(|(_, c)| !c.is_disk()).map(|(&i, _)| i).collect();
    let b = match boundary.len() {
        0 => return Err(MoveError::NoBoundary),
        1 => boundary[0],
        k => return Err(MoveError::MultipleBoundaryCircles(k)),
    };
    if poly.vertices().is_empty() && poly.circles().is_empty() {
        return Err(MoveError::EmptySingularSet);
    }
    let circuits = trace_with(&g);
    let owners = sheet_index(&g, &circuits);
    let sheet = match site {
        DisposalSite::Default => g.sheet(circuits[b].passages()[0]),
        DisposalSite::At(s) => {
            if owners.get(&s) != Some(&b) {
                return Err(MoveError::SiteInvalid(format!(
                    "sheet {}:{} is not on the boundary region",
                    s.segment, s.wing
                )));
            }
            s
        }
    };
    let rest: Vec<u8> = poly.segment_wings(sheet.segment).unwrap().into_iter().filter(|&w| w != sheet.wing).collect();
    let names = [sheet.wing, rest[0], rest[1]];
    let gadget = disposal_gadget();
    let (spliced, map) = splice(poly, sheet.segment, names, &gadget)?;
    let transfer = transfer_circuits(poly, &spliced, &map)?;
    let gn = Gluing::new(&spliced)?;
    let new_circuits = trace_with(&gn);
    let images: BTreeSet<usize> = transfer.values().copied().collect();
    let fresh: Vec<usize> = (0..new_circuits.len()).filter(|i| !images.contains(i)).collect();
    assert_eq!(fresh.len(), 1, "boundary disposal must create exactly one region");
    let mut delta: HashMap<usize, i64> = HashMap::new();
    for t in 1..3 {
        *delta.entry(owners[&Sheet { segment: sheet.segment, wing: names[t] }]).or_default() += DISPOSAL_DELTA[t];
    }
    let mut caps = BTreeMap::new();
    for (&i, &c) in poly.caps() {
        let j = transfer[&i];
        let cap = if i == b {
            let gl2 = z2_gleam_of(&gn, &new_circuits[j]) as i64;
            RegionCap::Disk { gleam: Some(Gleam::from_doubled(gl2)) }
        } else {
            match c {
                RegionCap::Disk { gleam } => {
                    RegionCap::Disk { gleam: gleam.map(|x| x.shifted(delta.get(&i).copied().unwrap_or(0))) }
                }
                RegionCap::PuncturedDisk => unreachable!(),
            }
        };
        caps.insert(j, cap);
    }
    caps.insert(fresh[0], RegionCap::Disk { gleam: Some(Gleam::ZERO) });
    Ok(spliced.with_caps(caps))
}
