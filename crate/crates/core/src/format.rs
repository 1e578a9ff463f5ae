//! The `shadow v1` line format and its JSON mirror.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyhedron::{Circle, Edge, Gleam, LegRef, Perm3, RegionCap, ShadowPolyhedron, WingMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn to_text(poly: &ShadowPolyhedron) -> String {
    let mut out = String::from("# shadow v1\n");
    for v in poly.vertices() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for e in poly.edges().values() {
        let m: Vec<String> = e.map.pairs().iter().map(|(a, b)| format!("{a}>{b}")).collect();
        writeln!(out, "edge {} {}-{} map {}", e.id, e.source, e.target, m.join(",")).unwrap();
    }
    for c in poly.circles().values() {
        writeln!(out, "circle {} monodromy {}", c.id, c.monodromy).unwrap();
    }
    for (i, cap) in poly.caps() {
        match cap {
            RegionCap::Disk { gleam: Some(g) } => writeln!(out, "cap {i} disk gleam {}/2", g.doubled()),
            RegionCap::Disk { gleam: None } => writeln!(out, "cap {i} disk"),
            RegionCap::PuncturedDisk => writeln!(out, "cap {i} punctured"),
        }
        .unwrap();
    }
    out
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find([' ', '\t']).unwrap_or(rest.len());
        if len == 0 {
            return self.err("unexpected end of line");
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        self.skip_ws();
        let at = self.pos;
        let w = self.word()?;
        if w != kw {
            self.pos = at;
            return self.err(format!("expected `{kw}`, found `{w}`"));
        }
        Ok(())
    }

    fn int<T: std::str::FromStr>(&mut self) -> Result<T, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let w = self.word()?;
        w.parse().or_else(|_| {
            self.pos = at;
            self.err(format!("expected an integer, found `{w}`"))
        })
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.text.len() {
            return self.err(format!("trailing input `{}`", &self.text[self.pos..]));
        }
        Ok(())
    }
}

fn parse_leg(c: &Cursor<'_>, s: &str, offset: usize) -> Result<LegRef, ParseError> {
    let bad =
        || ParseError { line: c.line, column: offset + 1, message: format!("expected `(vertex,leg)`, found `{s}`") };
    let inner = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (v, l) = inner.split_once(',').ok_or_else(bad)?;
    Ok(LegRef::new(v.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?))
}

pub fn parse_text(input: &str) -> Result<ShadowPolyhedron, ParseError> {
    let mut vertices = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut circles = Vec::new();
    let mut caps = Vec::new();
    for (k, raw) in input.lines().enumerate() {
        let text = raw.split('#').next().unwrap();
        let mut c = Cursor { line: k + 1, text, pos: 0 };
        c.skip_ws();
        if c.pos == text.len() {
            continue;
        }
        let at = c.pos;
        match c.word()? {
            "vertex" => {
                vertices.push(c.int()?);
            }
            "edge" => {
                let id = c.int()?;
                c.skip_ws();
                let at = c.pos;
                let ends = c.word()?;
                let (a, b) = ends.split_once(")-(").ok_or_else(|| ParseError {
                    line: c.line,
                    column: at + 1,
                    message: format!("expected `(v,leg)-(w,leg)`, found `{ends}`"),
                })?;
                let source = parse_leg(&c, &format!("{a})"), at)?;
                let target = parse_leg(&c, &format!("({b}"), at + a.len() + 2)?;
                c.keyword("map")?;
                c.skip_ws();
                let at = c.pos;
                let spec = c.word()?;
                let bad = || ParseError {
                    line: k + 1,
                    column: at + 1,
                    message: format!("expected three pairs `a>b,c>d,e>f`, found `{spec}`"),
                };
                let pairs: Vec<(u8, u8)> = spec
                    .split(',')
                    .map(|p| {
                        let (x, y) = p.split_once('>')?;
                        Some((x.parse().ok()?, y.parse().ok()?))
                    })
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?;
                let pairs: [(u8, u8); 3] = pairs.try_into().map_err(|_| bad())?;
                edges.push(Edge { id, source, target, map: WingMap::from_pairs(pairs) });
            }
            "circle" => {
                let id = c.int()?;
                c.keyword("monodromy")?;
                c.skip_ws();
                let at = c.pos;
                let m = c.word()?;
                let Some(monodromy) = Perm3::parse(m) else {
                    c.pos = at;
                    return c.err(format!("`{m}` is not a permutation of 012"));
                };
                circles.push(Circle { id, monodromy });
            }
            "cap" => {
                let idx: usize = c.int()?;
                c.skip_ws();
                let at = c.pos;
                let cap = match c.word()? {
                    "punctured" => RegionCap::PuncturedDisk,
                    "disk" => {
                        c.skip_ws();
                        if c.pos == text.len() {
                            RegionCap::Disk { gleam: None }
                        } else {
                            c.keyword("gleam")?;
                            c.skip_ws();
                            let at = c.pos;
                            let g = c.word()?;
                            let n = g.strip_suffix("/2").and_then(|n| n.parse::<i64>().ok());
                            let Some(n) = n else {
                                c.pos = at;
                                return c.err(format!("gleam must be written `<n>/2`, found `{g}`"));
                            };
                            RegionCap::Disk { gleam: Some(Gleam::from_doubled(n)) }
                        }
                    }
                    other => {
                        c.pos = at;
                        return c.err(format!("unknown cap kind `{other}`"));
                    }
                };
                if caps.iter().any(|(i, _)| *i == idx) {
                    c.pos = at;
                    return c.err(format!("circuit {idx} capped twice"));
                }
                caps.push((idx, cap));
            }
            other => {
                c.pos = at;
                return c.err(format!("unknown directive `{other}`"));
            }
        }
        c.end()?;
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in &edges {
        if !seen.insert(e.id) {
            return Err(ParseError { line: 0, column: 0, message: format!("duplicate edge id {}", e.id) });
        }
    }
    Ok(ShadowPolyhedron::from_parts(vertices, edges, circles, caps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonEdge {
    pub id: u32,
    pub source: LegRef,
    pub target: LegRef,
    pub map: Vec<[u8; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonCircle {
    pub id: u32,
    pub monodromy: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonCap {
    pub circuit: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gleam_doubled: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonShadow {
    pub format: String,
    pub vertices: Vec<u32>,
    pub edges: Vec<JsonEdge>,
    pub circles: Vec<JsonCircle>,
    pub caps: Vec<JsonCap>,
}

impl From<&ShadowPolyhedron> for JsonShadow {
    fn from(p: &ShadowPolyhedron) -> Self {
        JsonShadow {
            format: "shadow-v1".into(),
            vertices: p.vertices().iter().copied().collect(),
            edges: p
                .edges()
                .values()
                .map(|e| JsonEdge {
                    id: e.id,
                    source: e.source,
                    target: e.target,
                    map: e.map.pairs().iter().map(|&(a, b)| [a, b]).collect(),
                })
                .collect(),
            circles: p
                .circles()
                .values()
                .map(|c| JsonCircle { id: c.id, monodromy: c.monodromy.to_string() })
                .collect(),
            caps: p
                .caps()
                .iter()
                .map(|(&i, c)| JsonCap {
                    circuit: i,
                    kind: if c.is_disk() { "disk" } else { "punctured" }.into(),
                    gleam_doubled: c.gleam().map(|g| g.doubled()),
                })
                .collect(),
        }
    }
}

impl TryFrom<JsonShadow> for ShadowPolyhedron {
    type Error = String;

    fn try_from(j: JsonShadow) -> Result<Self, String> {
        if j.format != "shadow-v1" {
            return Err(format!("unsupported format `{}`", j.format));
        }
        let mut edges = Vec::new();
        for e in j.edges {
            let pairs: [[u8; 2]; 3] = e.map.try_into().map_err(|_| format!("edge {}: map needs three pairs", e.id))?;
            let map = WingMap::from_pairs(pairs.map(|[a, b]| (a, b)));
            edges.push(Edge { id: e.id, source: e.source, target: e.target, map });
        }
        let mut circles = Vec::new();
        for c in j.circles {
            let monodromy = Perm3::parse(&c.monodromy).ok_or_else(|| format!("circle {}: bad monodromy", c.id))?;
            circles.push(Circle { id: c.id, monodromy });
        }
        let mut caps = Vec::new();
        for c in j.caps {
            let cap = match (c.kind.as_str(), c.gleam_doubled) {
                ("disk", g) => RegionCap::Disk { gleam: g.map(Gleam::from_doubled) },
                ("punctured", None) => RegionCap::PuncturedDisk,
                ("punctured", Some(_)) => return Err(format!("cap {}: punctured caps carry no gleam", c.circuit)),
                (k, _) => return Err(format!("cap {}: unknown kind `{k}`", c.circuit)),
            };
            caps.push((c.circuit, cap));
        }
        Ok(ShadowPolyhedron::from_parts(j.vertices, edges, circles, caps))
    }
}

pub fn to_json(poly: &ShadowPolyhedron) -> String {
    serde_json::to_string_pretty(&JsonShadow::from(poly)).unwrap()
}

pub fn from_json(s: &str) -> Result<ShadowPolyhedron, String> {
    let j: JsonShadow = serde_json::from_str(s).map_err(|e| e.to_string())?;
    ShadowPolyhedron::try_from(j)
}
