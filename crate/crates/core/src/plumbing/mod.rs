//! Plumbing graphs of 3-manifolds: genus/Euler-decorated vertices, signed
//! edges (loops allowed) and arrowheads.

mod equiv;
mod moves;

pub use equiv::{canonicalize_signs, graphs_equivalent, isomorphic, normalize, MAX_EQUIV_VERTICES};
pub use moves::{move_r0a, move_r1_blowdown, move_r3_zero_chain, move_r5_handle};

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::resolution::int_det;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, o: Sign) -> Sign {
        Sign::from_value(self.value() * o.value())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlumbingError {
    #[error("no vertex v{0}")]
    NoVertex(u32),
    #[error("move {mv} does not apply at v{v}: {why}")]
    Move { mv: &'static str, v: u32, why: String },
    #[error("graph has {0} vertices after normalization, beyond the supported {MAX_EQUIV_VERTICES}")]
    TooLarge(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: u32,
    pub euler: i64,
    pub genus: u32,
    pub boundary: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn touches(&self, v: u32) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint opposite `v` (itself for loops).
    pub fn other(&self, v: u32) -> u32 {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub label: String,
    pub vertex: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    arrows: Vec<Arrow>,
}

impl PlumbingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.id).collect()
    }

    fn next_id(&self) -> u32 {
        self.vertices.iter().map(|v| v.id).max().unwrap_or(0) + 1
    }

    /// New genus-`g` vertex; returns its id.
    pub fn add_vertex(&mut self, euler: i64, genus: u32) -> u32 {
        let id = self.next_id();
        self.vertices.push(Vertex { id, euler, genus, boundary: 0 });
        id
    }

    pub fn add_vertex_full(&mut self, v: Vertex) {
        let pos = self.vertices.partition_point(|w| w.id < v.id);
        self.vertices.insert(pos, v);
    }

    pub fn add_edge(&mut self, a: u32, b: u32, sign: Sign) {
        self.edges.push(Edge { a: a.min(b), b: a.max(b), sign });
    }

    pub fn add_arrow(&mut self, label: &str, vertex: u32) {
        self.arrows.push(Arrow { label: label.to_string(), vertex });
    }

    pub fn vertex(&self, id: u32) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn vertex_mut(&mut self, id: u32) -> Option<&mut Vertex> {
        self.vertices.iter_mut().find(|v| v.id == id)
    }

    pub fn has_vertex(&self, id: u32) -> bool {
        self.vertex(id).is_some()
    }

    pub fn edges_at(&self, v: u32) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.touches(v))
    }

    /// Number of edge-ends at v (a loop counts twice).
    pub fn degree(&self, v: u32) -> usize {
        self.edges_at(v).map(|e| if e.is_loop() { 2 } else { 1 }).sum()
    }

    pub fn arrows_at(&self, v: u32) -> usize {
        self.arrows.iter().filter(|a| a.vertex == v).count()
    }

    /// Remove one edge between a and b (either orientation).
    pub fn remove_edge(&mut self, a: u32, b: u32) -> Option<Edge> {
        let k = self.edges.iter().position(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a))?;
        Some(self.edges.remove(k))
    }

    pub(crate) fn remove_vertex(&mut self, v: u32) {
        self.vertices.retain(|w| w.id != v);
        self.edges.retain(|e| !e.touches(v));
    }

    pub(crate) fn edges_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges
    }

    pub(crate) fn arrows_mut(&mut self) -> &mut Vec<Arrow> {
        &mut self.arrows
    }

    pub fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.first() else { return true };
        let mut seen = vec![first.id];
        let mut stack = vec![first.id];
        while let Some(v) = stack.pop() {
            for e in self.edges_at(v) {
                let w = e.other(v);
                if !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Vertex ids become 1..=n in their current order.
    pub fn compact(&self) -> PlumbingGraph {
        let map: BTreeMap<u32, u32> = self.vertices.iter().enumerate().map(|(k, v)| (v.id, k as u32 + 1)).collect();
        let vertices = self.vertices.iter().map(|v| Vertex { id: map[&v.id], ..v.clone() }).collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (map[&e.a], map[&e.b]);
                Edge { a: a.min(b), b: a.max(b), sign: e.sign }
            })
            .collect();
        edges.sort_by_key(|e| (e.a, e.b, e.sign));
        let arrows = self.arrows.iter().map(|a| Arrow { label: a.label.clone(), vertex: map[&a.vertex] }).collect();
        PlumbingGraph { vertices, edges, arrows }
    }

    /// Diagonal e_v plus 2ε per loop, off-diagonal the signed edge count.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let idx: BTreeMap<u32, usize> = self.vertices.iter().enumerate().map(|(k, v)| (v.id, k)).collect();
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for (k, v) in self.vertices.iter().enumerate() {
            m[k][k] = v.euler;
        }
        for e in &self.edges {
            let (a, b) = (idx[&e.a], idx[&e.b]);
            if a == b {
                m[a][a] += 2 * e.sign.value();
            } else {
                m[a][b] += e.sign.value();
                m[b][a] += e.sign.value();
            }
        }
        m
    }

    pub fn determinant(&self) -> BigInt {
        int_det(&self.intersection_matrix())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = write!(s, "v{} e={} g={}", v.id, v.euler, v.genus);
            if v.boundary > 0 {
                let _ = write!(s, " b={}", v.boundary);
            }
            s.push('\n');
        }
        for e in &self.edges {
            let _ = writeln!(s, "v{} -- v{} {}", e.a, e.b, e.sign);
        }
        for a in &self.arrows {
            let _ = writeln!(s, "arrow {} -> v{}", a.label, a.vertex);
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph plumbing {\n  node [shape=circle];\n");
        for v in &self.vertices {
            let label = if v.genus > 0 { format!("{} [{}]", v.euler, v.genus) } else { v.euler.to_string() };
            let _ = writeln!(s, "  v{} [label=\"{}\"];", v.id, label);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.a, e.b, e.sign);
        }
        for (k, a) in self.arrows.iter().enumerate() {
            let _ = writeln!(s, "  a{k} [shape=none, label=\"{}\"];", a.label);
            let _ = writeln!(s, "  v{} -- a{k} [dir=forward];", a.vertex);
        }
        s.push_str("}\n");
        s
    }

    /// Parse the text format; `m …` multiplicity lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<PlumbingGraph, PlumbingError> {
        let mut g = PlumbingGraph::new();
        let err = |line: usize, msg: &str| PlumbingError::Parse { line, msg: msg.to_string() };
        let vid = |tok: &str, line: usize| -> Result<u32, PlumbingError> {
            tok.strip_prefix('v').and_then(|n| n.parse().ok()).ok_or_else(|| err(line, &format!("bad vertex `{tok}`")))
        };
        let mut pending_edges = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let l = raw.split('#').next().unwrap().trim();
            if l.is_empty() || l.starts_with("m ") {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks[0] == "arrow" {
                if toks.len() != 4 || toks[2] != "->" {
                    return Err(err(line, "expected `arrow <label> -> v<id>`"));
                }
                g.add_arrow(toks[1], vid(toks[3], line)?);
            } else if toks.len() >= 2 && toks[1] == "--" {
                if toks.len() != 4 {
                    return Err(err(line, "expected `v<a> -- v<b> <+|->`"));
                }
                let sign = match toks[3] {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return Err(err(line, &format!("bad sign `{other}`"))),
                };
                pending_edges.push((line, vid(toks[0], line)?, vid(toks[2], line)?, sign));
            } else {
                let id = vid(toks[0], line)?;
                let mut v = Vertex { id, euler: 0, genus: 0, boundary: 0 };
                let mut have_e = false;
                for t in &toks[1..] {
                    let (key, val) = t.split_once('=').ok_or_else(|| err(line, &format!("bad field `{t}`")))?;
                    match key {
                        "e" => {
                            v.euler = val.parse().map_err(|_| err(line, "bad euler number"))?;
                            have_e = true;
                        }
                        "g" => v.genus = val.parse().map_err(|_| err(line, "bad genus"))?,
                        "b" => v.boundary = val.parse().map_err(|_| err(line, "bad boundary count"))?,
                        _ => return Err(err(line, &format!("unknown field `{key}`"))),
                    }
                }
                if !have_e {
                    return Err(err(line, "vertex without e="));
                }
                if g.has_vertex(id) {
                    return Err(err(line, &format!("duplicate vertex v{id}")));
                }
                g.add_vertex_full(v);
            }
        }
        for (line, a, b, sign) in pending_edges {
            for x in [a, b] {
                if !g.has_vertex(x) {
                    return Err(err(line, &format!("edge to unknown vertex v{x}")));
                }
            }
            g.add_edge(a, b, sign);
        }
        for a in &g.arrows {
            if !g.has_vertex(a.vertex) {
                return Err(err(0, &format!("arrow to unknown vertex v{}", a.vertex)));
            }
        }
        Ok(g)
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The Y-piece: middle vertex −1 with two −2 legs.
pub fn y_graph() -> PlumbingGraph {
    let mut g = PlumbingGraph::new();
    let m = g.add_vertex(-1, 0);
    let a = g.add_vertex(-2, 0);
    let b = g.add_vertex(-2, 0);
    g.add_edge(m, a, Sign::Plus);
    g.add_edge(m, b, Sign::Plus);
    g
}

/// Copy `h` into `g` with fresh ids; returns the id map (old → new).
pub fn disjoint_union(g: &mut PlumbingGraph, h: &PlumbingGraph) -> BTreeMap<u32, u32> {
    let mut map = BTreeMap::new();
    for v in h.vertices() {
        let id = g.add_vertex(v.euler, v.genus);
        g.vertex_mut(id).unwrap().boundary = v.boundary;
        map.insert(v.id, id);
    }
    for e in h.edges() {
        g.add_edge(map[&e.a], map[&e.b], e.sign);
    }
    for a in h.arrows() {
        g.add_arrow(&a.label, map[&a.vertex]);
    }
    map
}

/// A chain of the given Euler numbers joined by ⊕ edges.
pub fn bamboo(eulers: &[i64]) -> PlumbingGraph {
    let mut g = PlumbingGraph::new();
    let mut prev = None;
    for &e in eulers {
        let v = g.add_vertex(e, 0);
        if let Some(p) = prev {
            g.add_edge(p, v, Sign::Plus);
        }
        prev = Some(v);
    }
    g
}
