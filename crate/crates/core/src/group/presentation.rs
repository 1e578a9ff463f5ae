//! Presentations of π1 by spanning-tree collapse, and Tietze elimination.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::word::{cyclically_reduce, free_reduce, Letter, SignedWord, Word};
use crate::polyhedron::{EdgeId, RegionCap, Segment, ShadowPolyhedron, Sign, StructureError, VertexId};
use crate::regions::{trace_with, Gluing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FundamentalError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("singular set is disconnected or mixes circles with vertices")]
    Disconnected,
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("edge {0} is a bridge of the singular graph")]
    AvoidEdgeIsBridge(EdgeId),
    #[error("cannot eliminate: {0}")]
    NotEliminable(String),
}

/// Which segment each generator comes from and which circuit each relator
/// comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub generators: Vec<Segment>,
    pub relators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    provenance: Option<Provenance>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        assert!(relators.iter().flat_map(|r| r.letters()).all(|l| l.generator < generators.len()));
        Presentation { generators, relators, provenance: None }
    }

    /// Generators named `a1`, `a2`, … with relators given as signed 1-based indices.
    pub fn from_signed(generators: usize, relators: &[&[i64]]) -> Self {
        let names = (1..=generators).map(|i| format!("a{i}")).collect();
        let rels = relators.iter().map(|r| Word::from_signed(r, true).unwrap()).collect();
        Self::new(names, rels)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn relator_display(&self, k: usize) -> String {
        super::word::Display(&self.relators[k], &self.generators).to_string()
    }

    /// Inverts relator `k` in place (reversal of the region's orientation).
    pub fn with_relator_inverted(&self, k: usize) -> Presentation {
        let mut p = self.clone();
        p.relators[k] = p.relators[k].inverse();
        p
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(SignedWord::from).collect(),
            provenance: self.provenance.as_ref().map(|p| ProvenanceJson {
                generators: p
                    .generators
                    .iter()
                    .zip(&self.generators)
                    .map(|(s, g)| (g.clone(), s.to_string()))
                    .collect(),
                relators: p.relators.clone(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProvenanceJson {
    /// Generator name to segment name.
    pub generators: BTreeMap<String, String>,
    /// Circuit index of each relator.
    pub relators: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<SignedWord>,
    pub provenance: Option<ProvenanceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningTree {
    pub edges: BTreeSet<EdgeId>,
}

/// Breadth-first spanning tree of the singular graph from the least vertex,
/// trying incident edges in increasing id order, never using `avoid`.
pub fn spanning_tree(poly: &ShadowPolyhedron, avoid: Option<EdgeId>) -> Result<SpanningTree, FundamentalError> {
    poly.check_structure()?;
    if let Some(a) = avoid {
        if poly.edge(a).is_none() {
            return Err(FundamentalError::UnknownEdge(a));
        }
    }
    if !poly.singular_set_connected() {
        return Err(FundamentalError::Disconnected);
    }
    if poly.vertices().is_empty() {
        return Ok(SpanningTree { edges: BTreeSet::new() });
    }
    let mut incident: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for e in poly.edges().values() {
        if Some(e.id) == avoid || e.source.vertex == e.target.vertex {
            continue;
        }
        incident.entry(e.source.vertex).or_default().push((e.id, e.target.vertex));
        incident.entry(e.target.vertex).or_default().push((e.id, e.source.vertex));
    }
    for list in incident.values_mut() {
        list.sort();
    }
    let root = *poly.vertices().iter().next().unwrap();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut edges = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        for &(e, w) in incident.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                edges.insert(e);
                queue.push_back(w);
            }
        }
    }
    if seen.len() != poly.vertices().len() {
        return Err(FundamentalError::AvoidEdgeIsBridge(avoid.unwrap()));
    }
    Ok(SpanningTree { edges })
}

/// One generator per non-tree edge (or for the single circle) and one relator
/// per disk region, read off its circuit. Relators are not reduced.
pub fn presentation(poly: &ShadowPolyhedron, tree: &SpanningTree) -> Result<Presentation, FundamentalError> {
    let g = Gluing::new(poly)?;
    if !poly.singular_set_connected() {
        return Err(FundamentalError::Disconnected);
    }
    let segments: Vec<Segment> = if poly.vertices().is_empty() {
        poly.circles().keys().map(|&c| Segment::Circle(c)).collect()
    } else {
        poly.edges().keys().filter(|e| !tree.edges.contains(e)).map(|&e| Segment::Edge(e)).collect()
    };
    let index: BTreeMap<Segment, usize> = segments.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let circuits = trace_with(&g);
    let mut relators = Vec::new();
    let mut sources = Vec::new();
    for (i, c) in circuits.iter().enumerate() {
        if !matches!(poly.cap(i), Some(RegionCap::Disk { .. })) {
            continue;
        }
        let letters = c
            .passages()
            .iter()
            .filter_map(|p| index.get(&p.segment).map(|&k| Letter { generator: k, inverse: p.sign == Sign::Neg }))
            .collect();
        relators.push(Word::cyclic(letters));
        sources.push(i);
    }
    Ok(Presentation {
        generators: segments.iter().map(|s| s.to_string()).collect(),
        relators,
        provenance: Some(Provenance { generators: segments, relators: sources }),
    })
}

/// Presentation from the default spanning tree.
pub fn fundamental_group(poly: &ShadowPolyhedron) -> Result<Presentation, FundamentalError> {
    presentation(poly, &spanning_tree(poly, None)?)
}

/// Result of a Tietze elimination: the new presentation and the word `w` that
/// replaced the eliminated generator.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub presentation: Presentation,
    pub replacement: Word,
}

/// Removes generator `g` and relator `relator`, which must contain `g` exactly
/// once; the relator reads `g·w⁻¹` after rotation (and inversion if needed),
/// and `g` is replaced by `w` elsewhere, followed by free reduction.
pub fn eliminate_generator(pres: &Presentation, g: usize, relator: usize) -> Result<Elimination, FundamentalError> {
    if g >= pres.generators.len() {
        return Err(FundamentalError::NotEliminable(format!("no generator {g}")));
    }
    let r =
        pres.relators.get(relator).ok_or_else(|| FundamentalError::NotEliminable(format!("no relator {relator}")))?;
    if r.occurrences(g) != 1 {
        return Err(FundamentalError::NotEliminable(format!(
            "{} occurs {} times in relator {relator}",
            pres.generators[g],
            r.occurrences(g)
        )));
    }
    let k = r.letters().iter().position(|l| l.generator == g).unwrap();
    let rot = r.rotated(k);
    let rest = Word::linear(rot.letters()[1..].to_vec());
    let w = if rot.letters()[0].inverse { rest } else { rest.inverse() };
    let reindex = |x: usize| if x > g { x - 1 } else { x };
    let relators: Vec<Word> = pres
        .relators
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != relator)
        .map(|(_, r)| free_reduce(&r.substitute(g, w.letters())).map_generators(reindex))
        .collect();
    let mut generators = pres.generators.clone();
    generators.remove(g);
    let provenance = pres.provenance.as_ref().map(|p| {
        let mut p = p.clone();
        p.generators.remove(g);
        p.relators.remove(relator);
        p
    });
    Ok(Elimination {
        presentation: Presentation { generators, relators, provenance },
        replacement: w.map_generators(reindex),
    })
}

/// Greedy Tietze simplification: drop relators that reduce to the empty word
/// and eliminate any generator occurring exactly once in some relator, until
/// neither applies.
pub fn simplify(pres: &Presentation) -> Presentation {
    let mut p = pres.clone();
    loop {
        let keep: Vec<usize> =
            (0..p.relators.len()).filter(|&j| !cyclically_reduce(&p.relators[j]).is_empty()).collect();
        p.relators = keep.iter().map(|&j| cyclically_reduce(&p.relators[j])).collect();
        if let Some(prov) = p.provenance.as_mut() {
            prov.relators = keep.iter().map(|&j| prov.relators[j]).collect();
        }
        let pick = (0..p.relators.len())
            .find_map(|j| (0..p.generators.len()).find(|&g| p.relators[j].occurrences(g) == 1).map(|g| (g, j)));
        match pick {
            Some((g, j)) => p = eliminate_generator(&p, g, j).unwrap().presentation,
            None => return p,
        }
    }
}

/// Rank of the free group this presentation visibly defines, if Tietze
/// simplification removes every relator.
pub fn visibly_free_rank(pres: &Presentation) -> Option<usize> {
    let s = simplify(pres);
    s.relators.is_empty().then_some(s.generators.len())
}
