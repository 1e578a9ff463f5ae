//! Gluing data of simple polyhedra: true vertices, triple lines, circle
//! components and region caps.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type CircleId = u32;

/// One of the four legs of a true vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LegRef {
    pub vertex: VertexId,
    pub leg: u8,
}

impl LegRef {
    pub fn new(vertex: VertexId, leg: u8) -> Self {
        LegRef { vertex, leg }
    }
}

impl fmt::Display for LegRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.vertex, self.leg)
    }
}

/// Wing labels at leg `leg`: the other three leg indices, ascending.
pub fn wing_labels(leg: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut k = 0;
    for x in 0..4u8 {
        if x != leg {
            out[k] = x;
            k += 1;
        }
    }
    out
}

/// The two labels in `0..4` other than `a` and `b`, ascending.
pub(crate) fn complement_pair(a: u8, b: u8) -> (u8, u8) {
    let mut it = (0..4u8).filter(|&x| x != a && x != b);
    (it.next().unwrap(), it.next().unwrap())
}

/// Bijection between the wing labels at the source leg and at the target leg,
/// stored as three `(source, target)` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WingMap {
    pairs: [(u8, u8); 3],
}

impl WingMap {
    pub fn from_pairs(mut pairs: [(u8, u8); 3]) -> Self {
        pairs.sort();
        WingMap { pairs }
    }

    /// Maps `from[t]` to `to[t]`.
    pub fn from_lists(from: [u8; 3], to: [u8; 3]) -> Self {
        Self::from_pairs([(from[0], to[0]), (from[1], to[1]), (from[2], to[2])])
    }

    pub fn pairs(&self) -> [(u8, u8); 3] {
        self.pairs
    }

    pub fn image(&self, x: u8) -> Option<u8> {
        self.pairs.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    pub fn preimage(&self, y: u8) -> Option<u8> {
        self.pairs.iter().find(|p| p.1 == y).map(|p| p.0)
    }

    pub fn inverse(&self) -> WingMap {
        let p = self.pairs;
        Self::from_pairs([(p[0].1, p[0].0), (p[1].1, p[1].0), (p[2].1, p[2].0)])
    }

    /// True iff this is a bijection from the wings at `source_leg` onto the
    /// wings at `target_leg`.
    pub fn is_bijection(&self, source_leg: u8, target_leg: u8) -> bool {
        let mut src: Vec<u8> = self.pairs.iter().map(|p| p.0).collect();
        let mut tgt: Vec<u8> = self.pairs.iter().map(|p| p.1).collect();
        src.sort();
        tgt.sort();
        src == wing_labels(source_leg) && tgt == wing_labels(target_leg)
    }
}

/// Permutation of the circle wing labels `{0,1,2}`; `images[x]` is the image of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm3 {
    images: [u8; 3],
}

impl Perm3 {
    pub const IDENTITY: Perm3 = Perm3 { images: [0, 1, 2] };

    pub fn new(images: [u8; 3]) -> Self {
        Perm3 { images }
    }

    pub fn images(&self) -> [u8; 3] {
        self.images
    }

    pub fn is_valid(&self) -> bool {
        let mut s = self.images;
        s.sort();
        s == [0, 1, 2]
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.images[x as usize]
    }

    pub fn inverse(&self) -> Perm3 {
        let mut inv = [0u8; 3];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Perm3 { images: inv }
    }

    pub fn compose(&self, then: &Perm3) -> Perm3 {
        Perm3::new([then.apply(self.apply(0)), then.apply(self.apply(1)), then.apply(self.apply(2))])
    }

    /// Number of fixed points: 3 identity, 1 transposition, 0 three-cycle.
    pub fn fixed_points(&self) -> usize {
        (0..3u8).filter(|&x| self.apply(x) == x).count()
    }

    pub fn all() -> [Perm3; 6] {
        [
            Perm3::new([0, 1, 2]),
            Perm3::new([0, 2, 1]),
            Perm3::new([1, 0, 2]),
            Perm3::new([1, 2, 0]),
            Perm3::new([2, 0, 1]),
            Perm3::new([2, 1, 0]),
        ]
    }

    /// Parses an image string such as `120`.
    pub fn parse(s: &str) -> Option<Perm3> {
        let b = s.as_bytes();
        if b.len() != 3 {
            return None;
        }
        let mut images = [0u8; 3];
        for (k, c) in b.iter().enumerate() {
            if !(b'0'..=b'2').contains(c) {
                return None;
            }
            images[k] = c - b'0';
        }
        let p = Perm3 { images };
        p.is_valid().then_some(p)
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.images[0], self.images[1], self.images[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub source: LegRef,
    pub target: LegRef,
    pub map: WingMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Circle {
    pub id: CircleId,
    pub monodromy: Perm3,
}

/// Exact half-integer, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gleam {
    doubled: i64,
}

impl Gleam {
    pub const ZERO: Gleam = Gleam { doubled: 0 };

    pub fn from_doubled(doubled: i64) -> Self {
        Gleam { doubled }
    }

    pub fn doubled(&self) -> i64 {
        self.doubled
    }

    /// Fails unless `q` is an integer multiple of one half.
    pub fn from_rational(q: Rational64) -> Option<Gleam> {
        let d = q * Rational64::from_integer(2);
        d.is_integer().then(|| Gleam { doubled: d.to_integer() })
    }

    pub fn to_rational(&self) -> Rational64 {
        Rational64::new(self.doubled, 2)
    }

    pub fn shifted(&self, delta_doubled: i64) -> Gleam {
        Gleam { doubled: self.doubled + delta_doubled }
    }
}

impl fmt::Display for Gleam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionCap {
    /// An open disk; the gleam is unset on census objects and after vertex creation.
    Disk { gleam: Option<Gleam> },
    /// A disk with one open disk removed: a boundary region.
    PuncturedDisk,
}

impl RegionCap {
    pub fn disk() -> Self {
        RegionCap::Disk { gleam: None }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, RegionCap::Disk { .. })
    }

    pub fn gleam(&self) -> Option<Gleam> {
        match self {
            RegionCap::Disk { gleam } => *gleam,
            RegionCap::PuncturedDisk => None,
        }
    }
}

/// A piece of the singular set traversed by a passage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Segment {
    Edge(EdgeId),
    Circle(CircleId),
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Edge(e) => write!(f, "e{e}"),
            Segment::Circle(c) => write!(f, "c{c}"),
        }
    }
}

impl std::str::FromStr for Segment {
    type Err = String;

    /// `e<id>` or `c<id>`.
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad segment `{s}` (expected e<id> or c<id>)");
        let (kind, id) = s.split_at_checked(1).ok_or_else(bad)?;
        let id: u32 = id.parse().map_err(|_| bad())?;
        match kind {
            "e" => Ok(Segment::Edge(id)),
            "c" => Ok(Segment::Circle(id)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A directed passage of a region along a segment; `wing` is the region's
/// wing label at the entry end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub segment: Segment,
    pub sign: Sign,
    pub wing: u8,
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Pos { '+' } else { '-' };
        write!(f, "{}{}{}", self.segment, s, self.wing)
    }
}

/// A passage with its direction forgotten, named by the wing label at the
/// source end of an edge (or at the basepoint of a circle for a positive loop).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sheet {
    pub segment: Segment,
    pub wing: u8,
}

impl fmt::Display for Sheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.segment, self.wing)
    }
}

impl std::str::FromStr for Sheet {
    type Err = String;

    /// `<segment>:<wing>`, e.g. `e3:1`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (seg, wing) = s.split_once(':').ok_or_else(|| format!("bad sheet `{s}` (expected e<id>:<wing>)"))?;
        let wing: u8 = wing.parse().map_err(|_| format!("bad wing in `{s}`"))?;
        Ok(Sheet { segment: seg.parse()?, wing })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("edge {edge} references missing vertex {vertex}")]
    MissingVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} uses leg index {leg} outside 0..4")]
    BadLeg { edge: EdgeId, leg: u8 },
    #[error("leg {0} is matched more than once")]
    LegMatchedTwice(LegRef),
    #[error("leg {0} is unmatched")]
    LegUnmatched(LegRef),
    #[error("edge {0} has a wing map that is not a bijection between the wing labels of its legs")]
    BadWingMap(EdgeId),
    #[error("circle {0} has an invalid monodromy")]
    BadMonodromy(CircleId),
}

/// Gluing data plus one cap per traced circuit (keyed by circuit index).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShadowPolyhedron {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    circles: BTreeMap<CircleId, Circle>,
    caps: BTreeMap<usize, RegionCap>,
}

impl ShadowPolyhedron {
    /// Assembles gluing data without checking it; see [`crate::validate`].
    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
        circles: impl IntoIterator<Item = Circle>,
        caps: impl IntoIterator<Item = (usize, RegionCap)>,
    ) -> Self {
        ShadowPolyhedron {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().map(|e| (e.id, e)).collect(),
            circles: circles.into_iter().map(|c| (c.id, c)).collect(),
            caps: caps.into_iter().collect(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<EdgeId, Edge> {
        &self.edges
    }

    pub fn circles(&self) -> &BTreeMap<CircleId, Circle> {
        &self.circles
    }

    pub fn caps(&self) -> &BTreeMap<usize, RegionCap> {
        &self.caps
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn circle(&self, id: CircleId) -> Option<&Circle> {
        self.circles.get(&id)
    }

    pub fn cap(&self, circuit: usize) -> Option<&RegionCap> {
        self.caps.get(&circuit)
    }

    /// c(X): the number of true vertices.
    pub fn complexity(&self) -> usize {
        self.vertices.len()
    }

    pub fn region_count(&self) -> usize {
        self.caps.len()
    }

    pub fn is_special(&self) -> bool {
        self.caps.values().all(|c| c.is_disk())
    }

    pub fn has_boundary(&self) -> bool {
        self.caps.values().any(|c| !c.is_disk())
    }

    pub fn with_caps(&self, caps: BTreeMap<usize, RegionCap>) -> Self {
        ShadowPolyhedron { caps, ..self.clone() }
    }

    pub fn without_gleams(&self) -> Self {
        let caps = self
            .caps
            .iter()
            .map(|(&i, c)| match c {
                RegionCap::Disk { .. } => (i, RegionCap::disk()),
                RegionCap::PuncturedDisk => (i, RegionCap::PuncturedDisk),
            })
            .collect();
        self.with_caps(caps)
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.vertices.iter().next_back().map_or(0, |v| v + 1)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.keys().next_back().map_or(0, |e| e + 1)
    }

    /// Checks the leg matching, wing maps and monodromies.
    pub fn check_structure(&self) -> Result<(), StructureError> {
        let mut seen: BTreeSet<LegRef> = BTreeSet::new();
        for e in self.edges.values() {
            for end in [e.source, e.target] {
                if end.leg > 3 {
                    return Err(StructureError::BadLeg { edge: e.id, leg: end.leg });
                }
                if !self.vertices.contains(&end.vertex) {
                    return Err(StructureError::MissingVertex { edge: e.id, vertex: end.vertex });
                }
                if !seen.insert(end) {
                    return Err(StructureError::LegMatchedTwice(end));
                }
            }
            if !e.map.is_bijection(e.source.leg, e.target.leg) {
                return Err(StructureError::BadWingMap(e.id));
            }
        }
        for &v in &self.vertices {
            for leg in 0..4 {
                if !seen.contains(&LegRef::new(v, leg)) {
                    return Err(StructureError::LegUnmatched(LegRef::new(v, leg)));
                }
            }
        }
        for c in self.circles.values() {
            if !c.monodromy.is_valid() {
                return Err(StructureError::BadMonodromy(c.id));
            }
        }
        Ok(())
    }

    /// Whether the singular set is connected: one circle and nothing else, or
    /// no circles and a connected vertex graph.
    pub fn singular_set_connected(&self) -> bool {
        if !self.circles.is_empty() {
            return self.circles.len() == 1 && self.vertices.is_empty();
        }
        let Some(&root) = self.vertices.iter().next() else {
            return false;
        };
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for e in self.edges.values() {
            adj.entry(e.source.vertex).or_default().push(e.target.vertex);
            adj.entry(e.target.vertex).or_default().push(e.source.vertex);
        }
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in adj.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// The polyhedron is connected iff its singular set is, since every cap
    /// attaches along a single circuit.
    pub fn is_connected(&self) -> bool {
        self.singular_set_connected()
    }

    /// True iff the singular set is a (nonempty) graph with no circle components.
    pub fn is_quartic_graph(&self) -> bool {
        self.circles.is_empty() && !self.vertices.is_empty()
    }

    /// Every segment in ascending order: edges first, then circles.
    pub fn segments(&self) -> Vec<Segment> {
        self.edges.keys().map(|&e| Segment::Edge(e)).chain(self.circles.keys().map(|&c| Segment::Circle(c))).collect()
    }

    /// Wing labels at the source end of a segment.
    pub fn segment_wings(&self, s: Segment) -> Option<[u8; 3]> {
        match s {
            Segment::Edge(e) => self.edges.get(&e).map(|e| wing_labels(e.source.leg)),
            Segment::Circle(c) => self.circles.get(&c).map(|_| [0, 1, 2]),
        }
    }
}

/// Rejects values that are not exact half-integers.
pub fn half_integer(q: Rational64) -> Option<Gleam> {
    if q.denom().is_zero() {
        return None;
    }
    if q.denom().is_one() || *q.denom() == 2 {
        Gleam::from_rational(q)
    } else {
        None
    }
}
