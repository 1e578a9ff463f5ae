//! Region circuits, Euler characteristic, Z2-gleams and validation.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::polyhedron::{
    complement_pair, half_integer, LegRef, Passage, RegionCap, Segment, ShadowPolyhedron, Sheet, Sign, StructureError,
};

/// Leg lookup over a structurally valid polyhedron.
pub struct Gluing<'a> {
    poly: &'a ShadowPolyhedron,
    legs: HashMap<LegRef, (u32, Sign)>,
}

impl<'a> Gluing<'a> {
    pub fn new(poly: &'a ShadowPolyhedron) -> Result<Self, StructureError> {
        poly.check_structure()?;
        let mut legs = HashMap::with_capacity(poly.edges().len() * 2);
        for e in poly.edges().values() {
            legs.insert(e.source, (e.id, Sign::Pos));
            legs.insert(e.target, (e.id, Sign::Neg));
        }
        Ok(Gluing { poly, legs })
    }

    pub fn poly(&self) -> &ShadowPolyhedron {
        self.poly
    }

    /// Leg of the vertex at which a passage enters, if it runs along an edge.
    pub fn entry_leg(&self, p: Passage) -> Option<LegRef> {
        match p.segment {
            Segment::Edge(e) => {
                let e = &self.poly.edges()[&e];
                Some(if p.sign == Sign::Pos { e.source } else { e.target })
            }
            Segment::Circle(_) => None,
        }
    }

    /// Carries a wing label from the entry end of a passage to its exit end.
    pub fn transport(&self, p: Passage, label: u8) -> u8 {
        match p.segment {
            Segment::Edge(e) => {
                let m = &self.poly.edges()[&e].map;
                match p.sign {
                    Sign::Pos => m.image(label).expect("label at source leg"),
                    Sign::Neg => m.preimage(label).expect("label at target leg"),
                }
            }
            Segment::Circle(c) => {
                let mu = self.poly.circles()[&c].monodromy;
                match p.sign {
                    Sign::Pos => mu.apply(label),
                    Sign::Neg => mu.inverse().apply(label),
                }
            }
        }
    }

    fn leave(&self, leg: LegRef, label: u8) -> Passage {
        let (e, sign) = self.legs[&leg];
        Passage { segment: Segment::Edge(e), sign, wing: label }
    }

    /// The passage following `p` along the region's boundary.
    pub fn successor(&self, p: Passage) -> Passage {
        let y = self.transport(p, p.wing);
        match p.segment {
            Segment::Edge(e) => {
                let e = &self.poly.edges()[&e];
                let arrive = if p.sign == Sign::Pos { e.target } else { e.source };
                self.leave(LegRef::new(arrive.vertex, y), arrive.leg)
            }
            Segment::Circle(_) => Passage { wing: y, ..p },
        }
    }

    pub fn reverse(&self, p: Passage) -> Passage {
        Passage { segment: p.segment, sign: p.sign.flip(), wing: self.transport(p, p.wing) }
    }

    pub fn sheet(&self, p: Passage) -> Sheet {
        match p.sign {
            Sign::Pos => Sheet { segment: p.segment, wing: p.wing },
            Sign::Neg => Sheet { segment: p.segment, wing: self.transport(p, p.wing) },
        }
    }

    /// All directed passages in ascending order.
    pub fn directed_passages(&self) -> Vec<Passage> {
        let mut out = Vec::new();
        for s in self.poly.segments() {
            let pos = self.poly.segment_wings(s).unwrap();
            for sign in [Sign::Pos, Sign::Neg] {
                let labels = match (s, sign) {
                    (Segment::Edge(e), Sign::Neg) => crate::polyhedron::wing_labels(self.poly.edges()[&e].target.leg),
                    _ => pos,
                };
                for w in labels {
                    out.push(Passage { segment: s, sign, wing: w });
                }
            }
        }
        out.sort();
        out
    }
}

/// The attaching circle of one region, in canonical orientation and rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Circuit {
    passages: Vec<Passage>,
}

impl Circuit {
    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }
}

fn least_rotation(seq: &[Passage]) -> Vec<Passage> {
    let n = seq.len();
    let mut best = 0;
    for s in 1..n {
        for k in 0..n {
            let a = seq[(s + k) % n];
            let b = seq[(best + k) % n];
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    (0..n).map(|k| seq[(best + k) % n]).collect()
}

/// Traces every region circuit. Circuit indices are positions in the returned
/// (sorted) vector.
pub fn trace_regions(poly: &ShadowPolyhedron) -> Result<Vec<Circuit>, StructureError> {
    let g = Gluing::new(poly)?;
    Ok(trace_with(&g))
}

pub(crate) fn trace_with(g: &Gluing<'_>) -> Vec<Circuit> {
    let all = g.directed_passages();
    let mut seen: std::collections::HashSet<Passage> = std::collections::HashSet::new();
    let mut circuits = Vec::new();
    for &start in &all {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = vec![start];
        let mut p = g.successor(start);
        while p != start {
            orbit.push(p);
            p = g.successor(p);
        }
        let reversed: Vec<Passage> = orbit.iter().rev().map(|&q| g.reverse(q)).collect();
        for q in orbit.iter().chain(reversed.iter()) {
            let fresh = seen.insert(*q);
            assert!(fresh, "orbit meets its own reversal at {q}");
        }
        let a = least_rotation(&orbit);
        let b = least_rotation(&reversed);
        circuits.push(Circuit { passages: a.min(b) });
    }
    circuits.sort();
    let total: usize = circuits.iter().map(|c| c.len()).sum();
    assert_eq!(total, 3 * (g.poly().edges().len() + g.poly().circles().len()));
    circuits
}

/// Maps every sheet to the index of the circuit through it.
pub fn sheet_index(g: &Gluing<'_>, circuits: &[Circuit]) -> HashMap<Sheet, usize> {
    let mut out = HashMap::new();
    for (i, c) in circuits.iter().enumerate() {
        for &p in c.passages() {
            out.insert(g.sheet(p), i);
        }
    }
    out
}

/// χ = vertices − edges + disk caps; circles and punctured caps contribute 0.
pub fn euler_characteristic(poly: &ShadowPolyhedron) -> i64 {
    let disks = poly.caps().values().filter(|c| c.is_disk()).count() as i64;
    poly.vertices().len() as i64 - poly.edges().len() as i64 + disks
}

/// Band parity of a circuit: 0 for an annulus, 1 for a Möbius band.
pub fn z2_gleam_of(g: &Gluing<'_>, circuit: &Circuit) -> u8 {
    let first = circuit.passages()[0];
    let start = match g.entry_leg(first) {
        Some(l) => complement_pair(l.leg, first.wing),
        None => {
            let mut it = (0..3u8).filter(|&x| x != first.wing);
            (it.next().unwrap(), it.next().unwrap())
        }
    };
    let mut pair = start;
    for &p in circuit.passages() {
        pair = (g.transport(p, pair.0), g.transport(p, pair.1));
    }
    if pair == start {
        0
    } else {
        debug_assert_eq!(pair, (start.1, start.0));
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("no circuit with index {0}")]
    UnknownCircuit(usize),
}

pub fn z2_gleam(poly: &ShadowPolyhedron, circuit: usize) -> Result<u8, RegionError> {
    let g = Gluing::new(poly)?;
    let circuits = trace_with(&g);
    let c = circuits.get(circuit).ok_or(RegionError::UnknownCircuit(circuit))?;
    Ok(z2_gleam_of(&g, c))
}

/// gl2 of every circuit, in circuit order.
pub fn z2_gleams(poly: &ShadowPolyhedron) -> Result<Vec<u8>, StructureError> {
    let g = Gluing::new(poly)?;
    Ok(trace_with(&g).iter().map(|c| z2_gleam_of(&g, c)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &'static str, detail: Vec<String>) -> CheckResult {
    CheckResult { name, passed: detail.is_empty(), detail }
}

pub fn validate(poly: &ShadowPolyhedron) -> ValidationReport {
    let mut matching = Vec::new();
    let mut counts: BTreeMap<LegRef, usize> = BTreeMap::new();
    for e in poly.edges().values() {
        for end in [e.source, e.target] {
            if end.leg > 3 {
                matching.push(format!("edge {} uses leg index {}", e.id, end.leg));
            } else if !poly.vertices().contains(&end.vertex) {
                matching.push(format!("edge {} references missing vertex {}", e.id, end.vertex));
            } else {
                *counts.entry(end).or_default() += 1;
            }
        }
    }
    for &v in poly.vertices() {
        for leg in 0..4 {
            match counts.get(&LegRef::new(v, leg)).copied().unwrap_or(0) {
                1 => {}
                0 => matching.push(format!("leg ({v},{leg}) is unmatched")),
                k => matching.push(format!("leg ({v},{leg}) is matched {k} times")),
            }
        }
    }
    let mut maps = Vec::new();
    for e in poly.edges().values() {
        if e.source.leg <= 3 && e.target.leg <= 3 && !e.map.is_bijection(e.source.leg, e.target.leg) {
            maps.push(format!("edge {}: wing map is not a bijection between wing labels", e.id));
        }
    }
    for c in poly.circles().values() {
        if !c.monodromy.is_valid() {
            maps.push(format!("circle {}: monodromy is not a permutation", c.id));
        }
    }
    let mut checks = vec![check("matching", matching), check("wing-maps", maps)];
    let g = match Gluing::new(poly) {
        Ok(g) => g,
        Err(_) => {
            for name in ["connectivity", "caps", "gleam-parity"] {
                checks.push(CheckResult { name, passed: false, detail: vec!["skipped: gluing data malformed".into()] });
            }
            return ValidationReport { checks };
        }
    };
    let mut conn = Vec::new();
    if poly.vertices().is_empty() && poly.circles().is_empty() {
        conn.push("singular set is empty".into());
    } else if !poly.is_connected() {
        conn.push("polyhedron is disconnected".into());
    }
    checks.push(check("connectivity", conn));
    let circuits = trace_with(&g);
    let mut caps = Vec::new();
    for i in 0..circuits.len() {
        if !poly.caps().contains_key(&i) {
            caps.push(format!("circuit {i} has no cap"));
        }
    }
    for &i in poly.caps().keys() {
        if i >= circuits.len() {
            caps.push(format!("cap on unknown circuit {i} ({} circuits)", circuits.len()));
        }
    }
    checks.push(check("caps", caps));
    let mut parity = Vec::new();
    for (i, c) in circuits.iter().enumerate() {
        if let Some(RegionCap::Disk { gleam: Some(gl) }) = poly.cap(i) {
            let gl2 = z2_gleam_of(&g, c) as i64;
            if (gl.doubled() - gl2).rem_euclid(2) != 0 {
                parity.push(format!("circuit {i}: gleam {gl} incompatible with gl2 = {gl2}"));
            }
        }
    }
    checks.push(check("gleam-parity", parity));
    ValidationReport { checks }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GleamError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("no circuit with index {0}")]
    UnknownCircuit(usize),
    #[error("circuit {0} is a boundary region and takes no gleam")]
    NotInternal(usize),
    #[error("gleam for circuit {0} is not a half-integer")]
    NotHalfInteger(usize),
    #[error("disk region {0} has no gleam assigned")]
    MissingGleam(usize),
    #[error("gleam on circuit {0} violates the parity constraint")]
    GleamParity(usize),
}

/// Sets the gleam of every disk region.
pub fn set_gleams(
    poly: &ShadowPolyhedron,
    assignment: &BTreeMap<usize, Rational64>,
) -> Result<ShadowPolyhedron, GleamError> {
    let gl2 = z2_gleams(poly)?;
    let mut caps = poly.caps().clone();
    for (&i, &q) in assignment {
        match caps.get_mut(&i) {
            None => return Err(GleamError::UnknownCircuit(i)),
            Some(RegionCap::PuncturedDisk) => return Err(GleamError::NotInternal(i)),
            Some(RegionCap::Disk { gleam }) => {
                let gl = half_integer(q).ok_or(GleamError::NotHalfInteger(i))?;
                let parity = *gl2.get(i).ok_or(GleamError::UnknownCircuit(i))? as i64;
                if (gl.doubled() - parity).rem_euclid(2) != 0 {
                    return Err(GleamError::GleamParity(i));
                }
                *gleam = Some(gl);
            }
        }
    }
    for (&i, c) in &caps {
        if c.is_disk() && !assignment.contains_key(&i) {
            return Err(GleamError::MissingGleam(i));
        }
    }
    Ok(poly.with_caps(caps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::{Circle, Perm3};

    fn circle(mono: &str, caps: usize) -> ShadowPolyhedron {
        ShadowPolyhedron::from_parts(
            [],
            [],
            [Circle { id: 0, monodromy: Perm3::parse(mono).unwrap() }],
            (0..caps).map(|i| (i, RegionCap::disk())),
        )
    }

    #[test]
    fn circle_circuits() {
        let lens = |m| trace_regions(&circle(m, 0)).unwrap().iter().map(|c| c.len()).collect::<Vec<_>>();
        assert_eq!(lens("012"), vec![1, 1, 1]);
        assert_eq!(lens("120"), vec![3]);
        let mut t = lens("102");
        t.sort();
        assert_eq!(t, vec![1, 2]);
    }

    #[test]
    fn circle_z2_gleams() {
        assert_eq!(z2_gleams(&circle("012", 3)).unwrap(), vec![0, 0, 0]);
        assert_eq!(z2_gleams(&circle("120", 1)).unwrap(), vec![0]);
        let p = circle("102", 2);
        let circuits = trace_regions(&p).unwrap();
        let gl2 = z2_gleams(&p).unwrap();
        for (c, g) in circuits.iter().zip(gl2) {
            let expect = if c.len() == 1 { 1 } else { 0 };
            assert_eq!(g, expect, "{:?}", c);
        }
    }

    #[test]
    fn gleam_assignment_rules() {
        let x1 = circle("120", 1);
        let ok = set_gleams(&x1, &BTreeMap::from([(0, Rational64::from_integer(0))])).unwrap();
        assert!(validate(&ok).passed());
        assert_eq!(set_gleams(&x1, &BTreeMap::from([(0, Rational64::new(1, 2))])), Err(GleamError::GleamParity(0)));
        assert_eq!(set_gleams(&x1, &BTreeMap::from([(0, Rational64::new(1, 3))])), Err(GleamError::NotHalfInteger(0)));
        assert_eq!(set_gleams(&x1, &BTreeMap::new()), Err(GleamError::MissingGleam(0)));

        let t = circle("102", 2);
        let circuits = trace_regions(&t).unwrap();
        let wing2 = circuits.iter().position(|c| c.len() == 1).unwrap();
        let other = 1 - wing2;
        let a = BTreeMap::from([(wing2, Rational64::new(1, 2)), (other, Rational64::from_integer(3))]);
        assert!(set_gleams(&t, &a).is_ok());
    }

    #[test]
    fn validate_reports_each_check() {
        let mut bad = circle("120", 1);
        bad = bad.with_caps(BTreeMap::from([(0, RegionCap::disk()), (1, RegionCap::disk())]));
        let r = validate(&bad);
        assert!(!r.passed());
        assert_eq!(r.failures().map(|c| c.name).collect::<Vec<_>>(), vec!["caps"]);
    }
}
