//! `shadow`: command-line front end for the shadow-core engine.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid input,
//! 3 analysis hypotheses unmet.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use shadow_core::census::{census_report, CensusFilter, DEFAULT_CEILING};
use shadow_core::families::{build, FamilyKind};
use shadow_core::format::{from_json, parse_text, to_json, to_text};
use shadow_core::group::obstruction::{free_obstruction, rank_lower_bound, Verdict};
use shadow_core::group::presentation::{presentation, spanning_tree, visibly_free_rank};
use shadow_core::group::{abelianization, verify_claims};
use shadow_core::moves::{boundary_dispose, puncture, vertex_create, DisposalSite, VertexSite};
use shadow_core::regions::{trace_regions, validate, z2_gleams};
use shadow_core::report::poly_report;
use shadow_core::{canonical_form, GleamMode, Segment, ShadowPolyhedron, Sheet};

const CEILING_VAR: &str = "SHADOW_CENSUS_CEILING";

#[derive(Parser)]
#[command(name = "shadow", version, about = "Shadows of 4-manifolds: special polyhedra, pi1 and census")]
struct Cli {
    /// Output format for reports and polyhedra.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveKind {
    VertexCreate,
    BoundaryDispose,
    Puncture,
}

#[derive(Subcommand)]
enum Command {
    /// Check matching, wing maps, connectivity, caps and gleam parity.
    Validate { file: PathBuf },
    /// List region circuits with their caps and gl2.
    Trace { file: PathBuf },
    /// Z2-gleam of one circuit, or of all.
    Gl2 {
        file: PathBuf,
        #[arg(long)]
        circuit: Option<usize>,
    },
    /// Build X_k, X_k° (Xo) or Z_k.
    Family {
        #[arg(long)]
        kind: FamilyKind,
        #[arg(long)]
        k: usize,
        /// Emit a JSON property report instead of the polyhedron.
        #[arg(long)]
        report: bool,
    },
    /// Apply a move and print the result.
    Move {
        #[arg(value_enum)]
        kind: MoveKind,
        file: PathBuf,
        /// Vertex creation: segment (`e3`, `c0`).
        #[arg(long)]
        segment: Option<Segment>,
        /// Vertex creation: wiring index (0..12).
        #[arg(long, default_value_t = 0)]
        config: usize,
        /// Boundary disposal: sheet of the boundary region (`e3:1`).
        #[arg(long)]
        sheet: Option<Sheet>,
        /// Puncture: circuit index.
        #[arg(long)]
        circuit: Option<usize>,
    },
    /// Presentation of pi1 and H1.
    Pi1 {
        file: PathBuf,
        /// Keep this edge out of the spanning tree.
        #[arg(long)]
        avoid: Option<u32>,
    },
    /// Check the three word-combinatorial claims on the presentation.
    Claims { file: PathBuf },
    /// Try to certify that pi1 is not free of the given rank.
    Obstruct {
        file: PathBuf,
        #[arg(long)]
        rank: usize,
    },
    /// Enumerate connected special polyhedra up to a vertex count.
    Census {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, default_value_t = 1)]
        min_regions: usize,
        #[arg(long)]
        connected_quartic: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Raise the vertex ceiling (also via SHADOW_CENSUS_CEILING).
        #[arg(long)]
        ceiling: Option<usize>,
        /// Write the JSON lines report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Upper and lower bounds on special shadow-complexity for a family member.
    Bounds {
        #[arg(long)]
        family: FamilyKind,
        #[arg(long)]
        k: usize,
        /// Write the upper-bound witness polyhedron here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Canonical form as hex.
    Canon {
        file: PathBuf,
        #[arg(long)]
        ignore_gleams: bool,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Invalid(String),
    Unmet(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    path: Option<PathBuf>,
    format: Format,
}

impl Out {
    fn write(&self, text: &str) -> Outcome {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, value: &T) -> Outcome {
        self.write(&serde_json::to_string_pretty(value).context("serializing")?)
    }

    fn poly(&self, p: &ShadowPolyhedron) -> Outcome {
        match self.format {
            Format::Text => self.write(&to_text(p)),
            Format::Json => self.write(&to_json(p)),
        }
    }
}

fn load(path: &Path) -> Result<ShadowPolyhedron, Failure> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if s.trim_start().starts_with('{') {
        from_json(&s).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
    } else {
        parse_text(&s).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
    }
}

/// Loads and insists on a passing validation report.
fn load_valid(path: &Path) -> Result<ShadowPolyhedron, Failure> {
    let p = load(path)?;
    let report = validate(&p);
    if !report.passed() {
        let msgs: Vec<String> =
            report.failures().flat_map(|c| c.detail.iter().map(move |d| format!("{}: {d}", c.name))).collect();
        return Err(Failure::Invalid(msgs.join("\n")));
    }
    Ok(p)
}

fn census_ceiling(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CEILING_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Usage(anyhow::anyhow!("{CEILING_VAR} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_CEILING),
    }
}

fn run(cli: Cli) -> Outcome {
    let out = Out { path: cli.output, format: cli.format };
    match cli.command {
        Command::Validate { file } => {
            let p = load(&file)?;
            let report = validate(&p);
            match out.format {
                Format::Json => out.json(
                    &json!({"schema": "shadow-validation/v1", "passed": report.passed(), "checks": report.checks}),
                )?,
                Format::Text => {
                    let mut s = String::new();
                    for c in &report.checks {
                        s += &format!("{} {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name);
                        for d in &c.detail {
                            s += &format!("     {d}\n");
                        }
                    }
                    out.write(&s)?;
                }
            }
            if !report.passed() {
                let first: Vec<String> = report.failures().flat_map(|c| c.detail.clone()).collect();
                return Err(Failure::Invalid(first.join("\n")));
            }
            Ok(())
        }
        Command::Trace { file } => {
            let p = load_valid(&file)?;
            let circuits = trace_regions(&p).map_err(|e| Failure::Invalid(e.to_string()))?;
            let gl2 = z2_gleams(&p).map_err(|e| Failure::Invalid(e.to_string()))?;
            let rows: Vec<_> = circuits
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let cap = p.cap(i);
                    json!({
                        "circuit": i,
                        "length": c.len(),
                        "passages": c.passages().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                        "cap": cap.map(|c| if c.is_disk() { "disk" } else { "punctured" }),
                        "gleam_doubled": cap.and_then(|c| c.gleam()).map(|g| g.doubled()),
                        "gl2": gl2[i],
                    })
                })
                .collect();
            match out.format {
                Format::Json => out.json(&json!({"schema": "shadow-trace/v1", "circuits": rows})),
                Format::Text => {
                    let lines: Vec<String> = circuits
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            let ps: Vec<String> = c.passages().iter().map(|q| q.to_string()).collect();
                            format!("{i}: gl2={} [{}]", gl2[i], ps.join(" "))
                        })
                        .collect();
                    out.write(&lines.join("\n"))
                }
            }
        }
        Command::Gl2 { file, circuit } => {
            let p = load_valid(&file)?;
            let gl2 = z2_gleams(&p).map_err(|e| Failure::Invalid(e.to_string()))?;
            match circuit {
                Some(i) => {
                    let v = gl2.get(i).ok_or_else(|| Failure::Invalid(format!("no circuit with index {i}")))?;
                    out.json(&json!({"schema": "shadow-gl2/v1", "circuit": i, "gl2": v}))
                }
                None => out.json(&json!({"schema": "shadow-gl2/v1", "gl2": gl2})),
            }
        }
        Command::Family { kind, k, report } => {
            let p = build(kind, k).map_err(|e| Failure::Invalid(e.to_string()))?;
            if report {
                let r = poly_report(&p).map_err(|e| Failure::Invalid(e.to_string()))?;
                out.json(&json!({"schema": "shadow-family-report/v1", "family": kind.to_string(), "k": k, "report": r}))
            } else {
                out.poly(&p)
            }
        }
        Command::Move { kind, file, segment, config, sheet, circuit } => {
            let p = load_valid(&file)?;
            let result = match kind {
                MoveKind::VertexCreate => vertex_create(
                    &p,
                    match segment {
                        Some(segment) => VertexSite::At { segment, config },
                        None if config == 0 => VertexSite::Default,
                        None => return Err(Failure::Usage(anyhow::anyhow!("--config needs --segment"))),
                    },
                ),
                MoveKind::BoundaryDispose => {
                    boundary_dispose(&p, sheet.map_or(DisposalSite::Default, DisposalSite::At))
                }
                MoveKind::Puncture => {
                    let c = circuit.ok_or_else(|| Failure::Usage(anyhow::anyhow!("puncture needs --circuit")))?;
                    puncture(&p, c)
                }
            };
            out.poly(&result.map_err(|e| Failure::Invalid(e.to_string()))?)
        }
        Command::Pi1 { file, avoid } => {
            let p = load_valid(&file)?;
            let tree = spanning_tree(&p, avoid).map_err(|e| Failure::Invalid(e.to_string()))?;
            let pres = presentation(&p, &tree).map_err(|e| Failure::Invalid(e.to_string()))?;
            let h1 = abelianization(&pres);
            let words: Vec<String> = (0..pres.relators().len()).map(|j| pres.relator_display(j)).collect();
            out.json(&json!({
                "schema": "shadow-pi1/v1",
                "tree": tree.edges,
                "presentation": pres.to_json(),
                "relators_text": words,
                "h1": h1.to_string(),
                "h1_rank": h1.free_rank,
                "h1_torsion": h1.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "visibly_free_rank": visibly_free_rank(&pres),
            }))
        }
        Command::Claims { file } => {
            let p = load_valid(&file)?;
            let pres = shadow_core::group::fundamental_group(&p).map_err(|e| Failure::Invalid(e.to_string()))?;
            let report = verify_claims(&p, &pres);
            out.json(&json!({"schema": "shadow-claims/v1", "report": report}))?;
            if !report.hypotheses.all() {
                return Err(Failure::Unmet("polyhedron does not meet the claims' hypotheses".into()));
            }
            Ok(())
        }
        Command::Obstruct { file, rank } => {
            let p = load_valid(&file)?;
            let cert = free_obstruction(&p, rank).map_err(|e| Failure::Invalid(e.to_string()))?;
            let recheck = match (&cert.line, &cert.tree) {
                (Some(_), tree) => {
                    let t = shadow_core::group::presentation::SpanningTree { edges: tree.iter().copied().collect() };
                    presentation(&p, &t).map(|pres| cert.recheck(&pres)).unwrap_or(false)
                }
                (None, _) => true,
            };
            out.json(&json!({"schema": "shadow-obstruction/v1", "certificate": cert, "recheck": recheck}))?;
            if let Verdict::HypothesisUnmet(r) = &cert.verdict {
                return Err(Failure::Unmet(r.clone()));
            }
            Ok(())
        }
        Command::Census { max_vertices, min_regions, connected_quartic, workers, ceiling, json: json_out } => {
            let ceiling = census_ceiling(ceiling)?;
            let filter = CensusFilter {
                max_vertices,
                require_special: true,
                min_regions,
                connected_quartic_only: connected_quartic,
            };
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let report = census_report(&filter, workers, Some(ceiling)).map_err(|e| Failure::Usage(e.into()))?;
            let mut lines = String::new();
            for c in &report.classes {
                let mut v = serde_json::to_value(c).context("serializing")?;
                v["type"] = json!("class");
                lines += &serde_json::to_string(&v).context("serializing")?;
                lines.push('\n');
            }
            lines += &serde_json::to_string(&json!({
                "type": "aggregate",
                "schema": "shadow-census/v1",
                "filter": report.filter,
                "aggregate": report.aggregate,
            }))
            .context("serializing")?;
            lines.push('\n');
            match json_out {
                Some(path) => Out { path: Some(path), format: Format::Json }.write(&lines),
                None => out.write(&lines),
            }
        }
        Command::Bounds { family, k, witness } => {
            if family != FamilyKind::Z {
                return Err(Failure::Usage(anyhow::anyhow!("bounds are reported for the Z family only")));
            }
            let z = build(family, k).map_err(|e| Failure::Invalid(e.to_string()))?;
            let text = to_text(&z);
            if let Some(path) = &witness {
                fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            // The upper bound is read back from the emitted witness.
            let reread = parse_text(&text).map_err(|e| Failure::Invalid(e.to_string()))?;
            let special = reread.is_special() && validate(&reread).passed();
            let pres = shadow_core::group::fundamental_group(&reread).map_err(|e| Failure::Invalid(e.to_string()))?;
            let h1_rank = abelianization(&pres).free_rank;
            let free = visibly_free_rank(&pres) == Some(h1_rank);
            let lower = rank_lower_bound(&reread, free).map_err(|e| Failure::Invalid(e.to_string()))?;
            let upper = reread.complexity();
            let verdict = if special && upper == lower.bound_sc {
                format!("sc^sp(#_{k}(S^1xS^3)) = {upper}")
            } else {
                format!("{} <= sc^sp(#_{k}(S^1xS^3)) <= {upper}", lower.bound_sc)
            };
            out.json(&json!({
                "schema": "shadow-bounds/v1",
                "family": family.to_string(),
                "k": k,
                "upper": upper,
                "upper_witness": witness.as_ref().map(|p| p.display().to_string()),
                "upper_statement": "a special shadow with c true vertices gives sc^sp <= c",
                "witness_special": special,
                "pi1_visibly_free": free,
                "lower": lower.bound_sc,
                "lower_detail": lower,
                "verdict": verdict,
            }))
        }
        Command::Canon { file, ignore_gleams } => {
            let p = load_valid(&file)?;
            let mode = if ignore_gleams { GleamMode::Ignore } else { GleamMode::Include };
            let form = canonical_form(&p, mode).map_err(|e| Failure::Invalid(e.to_string()))?;
            let form = shadow_core::census::hex(&form);
            match out.format {
                Format::Text => out.write(&form),
                Format::Json => out.json(&json!({"schema": "shadow-canon/v1", "form": form, "gleams": !ignore_gleams})),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("invalid input: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Unmet(m)) => {
            eprintln!("hypothesis unmet: {m}");
            ExitCode::from(3)
        }
    }
}
