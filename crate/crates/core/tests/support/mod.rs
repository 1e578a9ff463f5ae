//! Independent oracles shared by the integration tests. Everything here works
//! from the raw gluing data and avoids the library's tracing, transport and
//! canonical-form code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use shadow_core::canonical::Relabeling;
use shadow_core::group::word::{cyclically_reduce, Letter, Word};
use shadow_core::{
    canonical_form, wing_labels, Circle, Edge, GleamMode, LegRef, Perm3, RegionCap, Segment, ShadowPolyhedron, Sheet,
    WingMap,
};

/// One end of a sheet: where it meets a corner (edges) or the basepoint (circles).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum End {
    /// (vertex, leg, wing label at that leg)
    Leg(u32, u8, u8),
    /// (circle, label at the basepoint)
    Base(u32, u8),
}

fn sides(end: End) -> [u8; 2] {
    let v: Vec<u8> = match end {
        End::Leg(_, i, j) => (0..4).filter(|&x| x != i && x != j).collect(),
        End::Base(_, x) => (0..3).filter(|&y| y != x).collect(),
    };
    [v[0], v[1]]
}

#[derive(Clone, Debug)]
struct SheetRec {
    sheet: Sheet,
    ends: [End; 2],
    /// Side label at end 0 to side label at end 1.
    forward: HashMap<u8, u8>,
}

/// A circuit as found by the oracle: sheets in order, each with its side map
/// in the direction of travel, and the corner points between them.
#[derive(Clone, Debug)]
pub struct OracleCircuit {
    pub sheets: Vec<Sheet>,
    steps: Vec<(End, End, HashMap<u8, u8>)>,
}

impl OracleCircuit {
    pub fn sheet_set(&self) -> BTreeSet<Sheet> {
        self.sheets.iter().copied().collect()
    }
}

fn sheet_records(p: &ShadowPolyhedron) -> Vec<SheetRec> {
    let mut out = Vec::new();
    for e in p.edges().values() {
        let (s, t) = (e.source, e.target);
        let img = |x: u8| e.map.pairs().iter().find(|&&(a, _)| a == x).unwrap().1;
        for x in wing_labels(s.leg) {
            let a = End::Leg(s.vertex, s.leg, x);
            let b = End::Leg(t.vertex, t.leg, img(x));
            let forward = sides(a).iter().map(|&y| (y, img(y))).collect();
            out.push(SheetRec { sheet: Sheet { segment: Segment::Edge(e.id), wing: x }, ends: [a, b], forward });
        }
    }
    for c in p.circles().values() {
        let m = c.monodromy.images();
        for x in 0..3u8 {
            let a = End::Base(c.id, x);
            let b = End::Base(c.id, m[x as usize]);
            let forward = sides(a).iter().map(|&y| (y, m[y as usize])).collect();
            // The two ends of a circle sheet are told apart by the side of the
            // basepoint they sit on.
            out.push(SheetRec { sheet: Sheet { segment: Segment::Circle(c.id), wing: x }, ends: [a, b], forward });
        }
    }
    out
}

/// Walks every circuit: along a sheet from one end to the other, then through
/// the corner to the next sheet. At a vertex the corner joins (leg i, wing j)
/// to (leg j, wing i); at a circle's basepoint the arriving end of one sheet
/// joins the departing end of the sheet with the same label.
pub fn oracle_circuits(p: &ShadowPolyhedron) -> Vec<OracleCircuit> {
    let recs = sheet_records(p);
    // (end, which) → sheet index; which = 0 for departing, 1 for arriving (circles only).
    let mut at: HashMap<(End, u8), usize> = HashMap::new();
    for (k, r) in recs.iter().enumerate() {
        for (side, &end) in r.ends.iter().enumerate() {
            let which = match end {
                End::Leg(..) => 0,
                End::Base(..) => side as u8,
            };
            let prev = at.insert((end, which), k);
            assert!(prev.is_none(), "end used twice");
        }
    }
    let partner = |end: End, which: u8| -> (End, u8) {
        match end {
            End::Leg(v, i, j) => (End::Leg(v, j, i), 0),
            End::Base(c, x) => (End::Base(c, x), 1 - which),
        }
    };
    let mut used = vec![false; recs.len()];
    let mut out = Vec::new();
    for start in 0..recs.len() {
        if used[start] {
            continue;
        }
        let mut sheets = Vec::new();
        let mut steps = Vec::new();
        let (mut k, mut dir) = (start, 0usize);
        loop {
            used[k] = true;
            let r = &recs[k];
            let (a, b) = (r.ends[dir], r.ends[1 - dir]);
            let map = if dir == 0 { r.forward.clone() } else { r.forward.iter().map(|(&x, &y)| (y, x)).collect() };
            sheets.push(r.sheet);
            steps.push((a, b, map));
            let which_b = match b {
                End::Leg(..) => 0,
                End::Base(..) => (1 - dir) as u8,
            };
            let (nb, nw) = partner(b, which_b);
            let next = at[&(nb, nw)];
            let ndir = match nb {
                End::Leg(..) => usize::from(recs[next].ends[0] != nb),
                End::Base(..) => nw as usize,
            };
            if next == start && ndir == 0 {
                break;
            }
            if next == start {
                panic!("circuit closes on its own reversal");
            }
            k = next;
            dir = ndir;
        }
        out.push(OracleCircuit { sheets, steps });
    }
    out
}

/// Builds the boundary band of the circuit as a triangulated strip (three
/// rectangles per sheet, two triangles per rectangle) and reports whether it
/// is orientable.
pub fn band_orientable(c: &OracleCircuit) -> bool {
    type V = (usize, usize, u8);
    let l = c.steps.len();
    let mut triangles: Vec<[V; 3]> = Vec::new();
    for (t, (a, _b, map)) in c.steps.iter().enumerate() {
        let [s0, s1] = sides(*a);
        // Columns: 0 at the start corner, 1 and 2 inside the sheet, 3 = next corner.
        let col = |k: usize, side: u8| -> V {
            match k {
                0 => (t, 0, side),
                3 => ((t + 1) % l, 0, map[&side]),
                _ => (t, k, if side == s0 { 0 } else { 1 }),
            }
        };
        for k in 0..3 {
            let (p, q) = (col(k, s0), col(k, s1));
            let (p2, q2) = (col(k + 1, s0), col(k + 1, s1));
            triangles.push([p, q, q2]);
            triangles.push([p, q2, p2]);
        }
    }
    let mut by_edge: HashMap<(V, V), Vec<(usize, bool)>> = HashMap::new();
    for (i, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (x, y) = (tri[k], tri[(k + 1) % 3]);
            assert_ne!(x, y, "degenerate triangle");
            let key = if x < y { (x, y) } else { (y, x) };
            by_edge.entry(key).or_default().push((i, x < y));
        }
    }
    let mut sign: Vec<Option<bool>> = vec![None; triangles.len()];
    sign[0] = Some(true);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let si = sign[i].unwrap();
        for k in 0..3 {
            let (x, y) = (triangles[i][k], triangles[i][(k + 1) % 3]);
            let key = if x < y { (x, y) } else { (y, x) };
            let here = x < y;
            for &(j, dir) in &by_edge[&key] {
                if j == i {
                    continue;
                }
                // Coherent orientations traverse a shared edge in opposite directions.
                let want = if dir == here { !si } else { si };
                match sign[j] {
                    None => {
                        sign[j] = Some(want);
                        stack.push(j);
                    }
                    Some(s) if s != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

pub fn oracle_gl2(c: &OracleCircuit) -> u8 {
    if band_orientable(c) {
        0
    } else {
        1
    }
}

/// χ from cell counts: true vertices, singular edges counted from the leg
/// matching, circles as one vertex plus one edge, one 2-cell per disk cap.
pub fn chi_cells(p: &ShadowPolyhedron) -> i64 {
    let v = p.vertices().len() as i64 + p.circles().len() as i64;
    let matched_legs = p.edges().len() as i64 * 2;
    let e = matched_legs / 2 + p.circles().len() as i64;
    let regions = oracle_circuits(p).len();
    let disks = (0..regions).filter(|&i| matches!(p.cap(i), Some(RegionCap::Disk { .. }))).count() as i64;
    v - e + disks
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Caps every circuit with an ungleamed disk, counting circuits with the oracle.
pub fn oracle_close(p: ShadowPolyhedron) -> ShadowPolyhedron {
    let k = oracle_circuits(&p).len();
    p.with_caps((0..k).map(|i| (i, RegionCap::disk())).collect())
}

fn connected(n: u32, edges: &[Edge]) -> bool {
    let mut parent: Vec<u32> = (0..n).collect();
    fn find(p: &mut Vec<u32>, x: u32) -> u32 {
        if p[x as usize] != x {
            let r = find(p, p[x as usize]);
            p[x as usize] = r;
        }
        p[x as usize]
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e.source.vertex), find(&mut parent, e.target.vertex));
        parent[a as usize] = b;
    }
    (0..n).all(|v| find(&mut parent, v) == find(&mut parent, 0))
}

fn matchings(legs: &[LegRef]) -> Vec<Vec<(LegRef, LegRef)>> {
    if legs.is_empty() {
        return vec![Vec::new()];
    }
    let first = legs[0];
    let mut out = Vec::new();
    for k in 1..legs.len() {
        let rest: Vec<LegRef> = legs.iter().enumerate().filter(|&(i, _)| i != 0 && i != k).map(|(_, &l)| l).collect();
        for mut m in matchings(&rest) {
            m.insert(0, (first, legs[k]));
            out.push(m);
        }
    }
    out
}

fn all_maps(a: u8, b: u8) -> Vec<WingMap> {
    let from = wing_labels(a);
    let to = wing_labels(b);
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().map(|p| WingMap::from_lists(from, [to[p[0]], to[p[1]], to[p[2]]])).collect()
}

/// Canonical forms of every connected polyhedron on `n ≥ 1` vertices, from all
/// perfect matchings of the legs times all wing maps. `reversed` lists the
/// legs in the opposite order, so matchings and maps are met differently.
pub fn naive_forms(n: u32, reversed: bool) -> BTreeSet<Vec<u8>> {
    let mut legs: Vec<LegRef> = (0..n).flat_map(|v| (0..4).map(move |l| LegRef::new(v, l))).collect();
    if reversed {
        legs.reverse();
    }
    let mut out = BTreeSet::new();
    for m in matchings(&legs) {
        let choices: Vec<Vec<WingMap>> = m.iter().map(|(a, b)| all_maps(a.leg, b.leg)).collect();
        let mut idx = vec![0usize; m.len()];
        loop {
            let edges: Vec<Edge> = m
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| Edge { id: i as u32, source: a, target: b, map: choices[i][idx[i]] })
                .collect();
            if connected(n, &edges) {
                let p = oracle_close(ShadowPolyhedron::from_parts(0..n, edges, [], []));
                out.insert(canonical_form(&p, GleamMode::Ignore).unwrap());
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < 6 {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

type NormalEdge = (LegRef, LegRef, Vec<(u8, u8)>);

/// Edge multiset with each edge stored from its smaller end.
fn normalized_edges(edges: impl IntoIterator<Item = (LegRef, LegRef, [(u8, u8); 3])>) -> Vec<NormalEdge> {
    let mut out: Vec<_> = edges
        .into_iter()
        .map(|(a, b, m)| {
            if a <= b {
                let mut v = m.to_vec();
                v.sort();
                (a, b, v)
            } else {
                let mut v: Vec<(u8, u8)> = m.iter().map(|&(x, y)| (y, x)).collect();
                v.sort();
                (b, a, v)
            }
        })
        .collect();
    out.sort();
    out
}

fn perms4() -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let mut s = [a, b, c, d];
                    let p = s;
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

fn vertex_perms(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in vertex_perms(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Exhaustive isomorphism search over vertex permutations and per-vertex leg
/// permutations (ungleamed, all caps disks). Circles are compared up to
/// conjugation and inversion of the monodromy.
pub fn brute_isomorphic(p: &ShadowPolyhedron, q: &ShadowPolyhedron) -> bool {
    if p.vertices().len() != q.vertices().len() || p.circles().len() != q.circles().len() {
        return false;
    }
    if p.vertices().is_empty() {
        let a = p.circles().values().next().unwrap().monodromy;
        let b = q.circles().values().next().unwrap().monodromy;
        return Perm3::all().iter().any(|pi| {
            let conj = pi.inverse().compose(&a).compose(pi);
            conj == b || conj == b.inverse()
        });
    }
    let target = normalized_edges(q.edges().values().map(|e| (e.source, e.target, e.map.pairs())));
    let n = p.vertices().len();
    let ps: Vec<u32> = p.vertices().iter().copied().collect();
    let qs: Vec<u32> = q.vertices().iter().copied().collect();
    let legs = perms4();
    for vp in vertex_perms(n) {
        let vmap: HashMap<u32, u32> = (0..n).map(|i| (ps[i], qs[vp[i] as usize])).collect();
        let mut sig = vec![0usize; n];
        loop {
            let sigma: HashMap<u32, [u8; 4]> = (0..n).map(|i| (ps[i], legs[sig[i]])).collect();
            let image = normalized_edges(p.edges().values().map(|e| {
                let (ss, st) = (sigma[&e.source.vertex], sigma[&e.target.vertex]);
                let a = LegRef::new(vmap[&e.source.vertex], ss[e.source.leg as usize]);
                let b = LegRef::new(vmap[&e.target.vertex], st[e.target.leg as usize]);
                let m = e.map.pairs().map(|(x, y)| (ss[x as usize], st[y as usize]));
                (a, b, m)
            }));
            if image == target {
                return true;
            }
            let mut k = 0;
            while k < n {
                sig[k] += 1;
                if sig[k] < 24 {
                    break;
                }
                sig[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    false
}

/// A uniformly random relabeling of vertices, legs, edge ids, edge
/// directions and circle data.
pub fn random_relabeling<R: Rng>(p: &ShadowPolyhedron, rng: &mut R) -> Relabeling {
    let mut vs: Vec<u32> = p.vertices().iter().copied().collect();
    let old = vs.clone();
    vs.shuffle(rng);
    let offset = rng.gen_range(0..5);
    let vertex: BTreeMap<u32, u32> = old.iter().zip(vs.iter()).map(|(&a, &b)| (a, b + offset)).collect();
    let all = perms4();
    let legs = old.iter().map(|&v| (v, all[rng.gen_range(0..24)])).collect();
    let mut es: Vec<u32> = p.edges().keys().copied().collect();
    let olde = es.clone();
    es.shuffle(rng);
    let edge = olde.iter().zip(es.iter()).map(|(&a, &b)| (a, b)).collect();
    let flip = olde.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let circle_labels = p.circles().keys().map(|&c| (c, Perm3::all()[rng.gen_range(0..6)])).collect();
    let circle_reverse = p.circles().keys().copied().filter(|_| rng.gen_bool(0.5)).collect();
    Relabeling { vertex, legs, edge, flip, circle: BTreeMap::new(), circle_labels, circle_reverse }
}

pub fn circle(m: [u8; 3]) -> ShadowPolyhedron {
    oracle_close(ShadowPolyhedron::from_parts([], [], [Circle { id: 0, monodromy: Perm3::new(m) }], []))
}

/// Greedy Whitehead reduction of a cyclic word in `gens` generators. A word
/// that is not of minimal length in its automorphism orbit can always be
/// shortened by one Whitehead automorphism, so the result has minimal length.
pub fn whitehead_minimize(w: &Word, gens: usize) -> Word {
    let apply = |w: &Word, a: Letter, choice: &[u8]| -> Word {
        let mut out = Vec::new();
        for &l in w.letters() {
            if l.generator == a.generator {
                out.push(l);
                continue;
            }
            let c = choice[l.generator];
            let mut img = Vec::new();
            if c & 2 != 0 {
                img.push(a.inv());
            }
            img.push(Letter::pos(l.generator));
            if c & 1 != 0 {
                img.push(a);
            }
            if l.inverse {
                img = img.into_iter().rev().map(|x| x.inv()).collect();
            }
            out.extend(img);
        }
        cyclically_reduce(&Word::cyclic(out))
    };
    let mut w = cyclically_reduce(w);
    loop {
        let mut shorter = None;
        'search: for g in 0..gens {
            for inverse in [false, true] {
                let a = Letter { generator: g, inverse };
                for code in 0..4usize.pow(gens as u32 - 1) {
                    let mut choice = vec![0u8; gens];
                    let mut c = code;
                    for (h, slot) in choice.iter_mut().enumerate() {
                        if h != g {
                            *slot = (c % 4) as u8;
                            c /= 4;
                        }
                    }
                    let v = apply(&w, a, &choice);
                    if v.len() < w.len() {
                        shorter = Some(v);
                        break 'search;
                    }
                }
            }
        }
        match shorter {
            Some(v) => w = v,
            None => return w,
        }
    }
}
