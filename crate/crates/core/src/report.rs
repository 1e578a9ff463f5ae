//! Property summaries of a single polyhedron.

use serde::Serialize;

use crate::group::claims::{verify_claims, ClaimsReport};
use crate::group::presentation::{fundamental_group, visibly_free_rank, FundamentalError};
use crate::group::snf::abelianization;
use crate::polyhedron::ShadowPolyhedron;
use crate::regions::{euler_characteristic, validate, z2_gleams};

#[derive(Clone, Debug, Serialize)]
pub struct RegionSummary {
    pub circuit: usize,
    pub length: usize,
    pub kind: &'static str,
    pub gl2: u8,
    /// Gleam as `n/2`, absent for punctured or ungleamed caps.
    pub gleam: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyReport {
    pub c: usize,
    pub regions: usize,
    pub special: bool,
    pub boundary: bool,
    pub chi: i64,
    pub valid: bool,
    pub region_list: Vec<RegionSummary>,
    pub h1: String,
    pub h1_rank: usize,
    pub h1_torsion: Vec<String>,
    /// Rank when Tietze simplification removes every relator.
    pub visibly_free_rank: Option<usize>,
    pub generators: usize,
    pub relators: usize,
    pub claims: ClaimsReport,
}

pub fn poly_report(p: &ShadowPolyhedron) -> Result<PolyReport, FundamentalError> {
    let pres = fundamental_group(p)?;
    let h1 = abelianization(&pres);
    let circuits = crate::regions::trace_regions(p)?;
    let gl2 = z2_gleams(p)?;
    let region_list = circuits
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let cap = p.cap(i);
            RegionSummary {
                circuit: i,
                length: c.len(),
                kind: match cap {
                    Some(c) if c.is_disk() => "disk",
                    Some(_) => "punctured",
                    None => "uncapped",
                },
                gl2: gl2[i],
                gleam: cap.and_then(|c| c.gleam()).map(|g| format!("{}/2", g.doubled())),
            }
        })
        .collect();
    Ok(PolyReport {
        c: p.complexity(),
        regions: p.region_count(),
        special: p.is_special(),
        boundary: p.has_boundary(),
        chi: euler_characteristic(p),
        valid: validate(p).passed(),
        region_list,
        h1: h1.to_string(),
        h1_rank: h1.free_rank,
        h1_torsion: h1.torsion.iter().map(|t| t.to_string()).collect(),
        visibly_free_rank: visibly_free_rank(&pres),
        generators: pres.generators().len(),
        relators: pres.relators().len(),
        claims: verify_claims(p, &pres),
    })
}
