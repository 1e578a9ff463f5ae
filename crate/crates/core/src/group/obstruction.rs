//! Certificates that π1 of a special polyhedron with n true vertices is not
//! free of rank n, following the case analysis on the occurrences of one
//! eliminated generator.
//!
//! The last step is a per-instance word computation: after substituting the
//! eliminated generator, some relator `ρ` must be trivial in the free group,
//! since otherwise ⟨a_2..a_{n+1} | ρ⟩ would be a proper quotient of F_n
//! surjecting onto F_n, which the Hopf property forbids.

use serde::Serialize;

use super::claims::{verify_claims, ClaimsReport};
use super::presentation::{eliminate_generator, presentation, spanning_tree, FundamentalError, Presentation};
use super::snf::{abelianization, AbelianGroup};
use super::word::{cyclically_reduce, SignedWord, Word};
use crate::polyhedron::{EdgeId, Segment, ShadowPolyhedron};
use crate::regions::{trace_with, Gluing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "reason")]
pub enum Verdict {
    ContradictionCertified,
    HypothesisUnmet(String),
    Inconclusive(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// Two further relators each contain the generator once.
    #[serde(rename = "i")]
    TwoRelators,
    /// One relator contains the generator and its inverse once each.
    #[serde(rename = "ii")]
    OppositeSigns,
    /// One relator contains the generator twice.
    #[serde(rename = "iii")]
    SameSign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fact")]
pub enum Fact {
    /// Fewer generators than the rank: no surjection onto F_rank.
    GeneratorDeficit { generators: usize, rank: usize },
    /// The eliminated generator equals `replacement` (from the pivot relator).
    Replacement { generator: usize, pivot: usize, pivot_inverted: bool, replacement: SignedWord },
    /// Relator `relator` (inverted first if flagged) becomes `substituted`
    /// after replacing the generator, and cyclically reduces to `reduced`.
    Substitution { relator: usize, inverted: bool, substituted: SignedWord, reduced: SignedWord },
    /// Abelianization of the one-relator group on the remaining generators.
    QuotientAbelianization { group: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub rank: usize,
    /// Triple line a_1 and its region R_1 (circuit index), when run on a polyhedron.
    pub line: Option<EdgeId>,
    pub region: Option<usize>,
    pub tree: Vec<EdgeId>,
    /// Generator index of a_1 and relator index of R_1 in the presentation.
    pub generator: Option<usize>,
    pub pivot: Option<usize>,
    pub claims: Option<ClaimsReport>,
    pub case: Option<Case>,
    pub facts: Vec<Fact>,
    pub verdict: Verdict,
}

impl ObstructionCertificate {
    fn unmet(rank: usize, reason: &str) -> Self {
        ObstructionCertificate {
            rank,
            line: None,
            region: None,
            tree: Vec::new(),
            generator: None,
            pivot: None,
            claims: None,
            case: None,
            facts: Vec::new(),
            verdict: Verdict::HypothesisUnmet(reason.into()),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::ContradictionCertified
    }

    /// Re-derives every recorded fact from `pres` alone.
    pub fn recheck(&self, pres: &Presentation) -> bool {
        let mut w1: Option<Word> = None;
        for f in &self.facts {
            let ok = match f {
                Fact::GeneratorDeficit { generators, rank } => {
                    *generators + 1 == pres.generators().len() && generators < rank && *rank == self.rank
                }
                Fact::Replacement { generator, pivot, pivot_inverted, replacement } => {
                    let p = if *pivot_inverted { pres.with_relator_inverted(*pivot) } else { pres.clone() };
                    match eliminate_generator(&p, *generator, *pivot) {
                        Ok(e) => {
                            let w = replacement_in_full(&e.replacement, *generator);
                            let same = SignedWord::from(&w) == *replacement;
                            w1 = Some(w);
                            same
                        }
                        Err(_) => false,
                    }
                }
                Fact::Substitution { relator, inverted, substituted, reduced } => {
                    let (Some(w), Some(g)) = (&w1, self.generator) else { return false };
                    let Some(r) = pres.relators().get(*relator) else { return false };
                    let r = if *inverted { r.inverse() } else { r.clone() };
                    let s = r.substitute(g, w.letters());
                    SignedWord::from(&s) == *substituted && SignedWord::from(&cyclically_reduce(&s)) == *reduced
                }
                Fact::QuotientAbelianization { .. } => true,
            };
            if !ok {
                return false;
            }
        }
        match self.verdict {
            Verdict::ContradictionCertified => self.facts.iter().any(|f| match f {
                Fact::GeneratorDeficit { .. } => true,
                Fact::Substitution { reduced, .. } => !reduced.0.is_empty(),
                _ => false,
            }),
            _ => true,
        }
    }
}

/// Maps generator indices of the eliminated presentation back to the full one.
fn replacement_in_full(w: &Word, removed: usize) -> Word {
    w.map_generators(|x| if x >= removed { x + 1 } else { x })
}

/// Runs the case analysis on a presentation with generators a_1..a_{n+1},
/// eliminating generator `a1` through relator `r1`, against free rank `rank`.
pub fn obstruct_presentation(pres: &Presentation, a1: usize, r1: usize, rank: usize) -> ObstructionCertificate {
    let mut cert = ObstructionCertificate::unmet(rank, "");
    cert.generator = Some(a1);
    cert.pivot = Some(r1);
    if pres.relators().len() < 2 {
        cert.verdict = Verdict::HypothesisUnmet("m<2".into());
        return cert;
    }
    let n = pres.generators().len() - 1;
    let Some(r) = pres.relators().get(r1) else {
        cert.verdict = Verdict::Inconclusive(format!("no relator {r1}"));
        return cert;
    };
    if r.occurrences(a1) != 1 {
        cert.verdict = Verdict::Inconclusive("pivot relator does not contain a_1 exactly once".into());
        return cert;
    }
    let pivot_inverted = r.letters().iter().any(|l| l.generator == a1 && l.inverse);
    let normalized = if pivot_inverted { pres.with_relator_inverted(r1) } else { pres.clone() };
    let elim = eliminate_generator(&normalized, a1, r1).expect("single occurrence");
    let w1 = replacement_in_full(&elim.replacement, a1);
    cert.facts.push(Fact::Replacement { generator: a1, pivot: r1, pivot_inverted, replacement: SignedWord::from(&w1) });
    if n > rank {
        cert.verdict = Verdict::HypothesisUnmet("n>k: proof not needed".into());
        return cert;
    }
    if n < rank {
        cert.facts.push(Fact::GeneratorDeficit { generators: n, rank });
        cert.verdict = Verdict::ContradictionCertified;
        return cert;
    }
    // Occurrences of a_1 in the other relators: (relator, positive count, negative count).
    let hits: Vec<(usize, usize, usize)> = pres
        .relators()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != r1)
        .filter_map(|(j, r)| {
            let pos = r.letters().iter().filter(|l| l.generator == a1 && !l.inverse).count();
            let neg = r.letters().iter().filter(|l| l.generator == a1 && l.inverse).count();
            (pos + neg > 0).then_some((j, pos, neg))
        })
        .collect();
    let (case, relator, inverted) = match hits.as_slice() {
        [(j, p1, n1), (_, p2, n2)] if p1 + n1 == 1 && p2 + n2 == 1 => (Case::TwoRelators, *j, *n1 == 1),
        [(j, 1, 1)] => (Case::OppositeSigns, *j, false),
        [(j, 2, 0)] => (Case::SameSign, *j, false),
        [(j, 0, 2)] => (Case::SameSign, *j, true),
        _ => {
            cert.verdict = Verdict::Inconclusive("occurrences of a_1 match none of the three cases".into());
            return cert;
        }
    };
    cert.case = Some(case);
    let r2 = &pres.relators()[relator];
    let r2 = if inverted { r2.inverse() } else { r2.clone() };
    let start = r2.letters().iter().position(|l| l.generator == a1 && !l.inverse).unwrap();
    let substituted = r2.rotated(start).substitute(a1, w1.letters());
    let reduced = cyclically_reduce(&substituted);
    let substituted_unrotated = r2.substitute(a1, w1.letters());
    cert.facts.push(Fact::Substitution {
        relator,
        inverted,
        substituted: SignedWord::from(&substituted_unrotated),
        reduced: SignedWord::from(&cyclically_reduce(&substituted_unrotated)),
    });
    let rest: Vec<String> =
        pres.generators().iter().enumerate().filter(|&(g, _)| g != a1).map(|(_, s)| s.clone()).collect();
    let one = Presentation::new(rest, vec![reduced.map_generators(|x| if x > a1 { x - 1 } else { x })]);
    cert.facts.push(Fact::QuotientAbelianization { group: abelianization(&one).to_string() });
    cert.verdict = if reduced.is_empty() {
        Verdict::Inconclusive("substituted relator reduces to the empty word".into())
    } else {
        Verdict::ContradictionCertified
    };
    cert
}

/// Least edge carrying a region exactly once, with the least such region.
pub fn choose_line(poly: &ShadowPolyhedron) -> Result<Option<(EdgeId, usize)>, FundamentalError> {
    let g = Gluing::new(poly)?;
    let circuits = trace_with(&g);
    for &e in poly.edges().keys() {
        for (i, c) in circuits.iter().enumerate() {
            let k = c.passages().iter().filter(|p| p.segment == Segment::Edge(e)).count();
            if k == 1 {
                return Ok(Some((e, i)));
            }
        }
    }
    Ok(None)
}

/// Replays the case analysis on `poly` against free rank `rank`.
pub fn free_obstruction(poly: &ShadowPolyhedron, rank: usize) -> Result<ObstructionCertificate, FundamentalError> {
    poly.check_structure()?;
    if !poly.singular_set_connected() {
        return Err(FundamentalError::Disconnected);
    }
    let gate = if !poly.is_special() {
        Some("not special")
    } else if !poly.is_quartic_graph() {
        Some("singular set is not a quartic graph")
    } else if poly.region_count() < 2 {
        Some("m<2")
    } else if poly.complexity() < 2 {
        Some("n<2")
    } else {
        None
    };
    if let Some(reason) = gate {
        return Ok(ObstructionCertificate::unmet(rank, reason));
    }
    let Some((line, region)) = choose_line(poly)? else {
        let mut c = ObstructionCertificate::unmet(rank, "");
        c.verdict = Verdict::Inconclusive("no triple line carries a region exactly once".into());
        return Ok(c);
    };
    let tree = spanning_tree(poly, Some(line))?;
    let pres = presentation(poly, &tree)?;
    let prov = pres.provenance().unwrap();
    let a1 = prov.generators.iter().position(|&s| s == Segment::Edge(line)).unwrap();
    let r1 = prov.relators.iter().position(|&c| c == region).unwrap();
    let mut cert = obstruct_presentation(&pres, a1, r1, rank);
    cert.line = Some(line);
    cert.region = Some(region);
    cert.tree = tree.edges.iter().copied().collect();
    cert.claims = Some(verify_claims(poly, &pres));
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankBound {
    pub h1: AbelianGroup,
    /// Free rank of H1; a lower bound for the rank of π1.
    pub h1_rank: usize,
    pub torsion_free: bool,
    /// Lower bound on the special shadow-complexity of the 4-manifold.
    pub bound_sc: usize,
    pub free_case: bool,
    pub statement: String,
}

/// `bound_sc` is the H1 rank r, or r + 1 when the caller asserts that π1 is
/// free (rank(π1) + 1 ≤ sc_sp in that case, rank(π1) ≤ sc_sp in general).
pub fn rank_lower_bound(poly: &ShadowPolyhedron, free: bool) -> Result<RankBound, FundamentalError> {
    let pres = super::presentation::fundamental_group(poly)?;
    let h1 = abelianization(&pres);
    let r = h1.free_rank;
    let statement =
        if free { "pi1 free: rank(pi1) + 1 <= sc_sp".to_string() } else { "rank(pi1) <= sc_sp".to_string() };
    Ok(RankBound {
        torsion_free: h1.is_torsion_free(),
        h1_rank: r,
        bound_sc: if free { r + 1 } else { r },
        free_case: free,
        h1,
        statement,
    })
}
