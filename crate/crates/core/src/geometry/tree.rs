//! Finite metric trees (geodesic realizations of weighted trees).
//!
//! A point is an `(edge, offset)` pair, the offset measured from the edge's
//! first endpoint. Points sitting on a vertex are stored on the incident edge
//! of smallest index so that equal locations compare equal.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreePoint {
    edge: usize,
    offset: f64,
}

impl TreePoint {
    pub fn edge(&self) -> usize {
        self.edge
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Edge {
    u: usize,
    v: usize,
    length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<Edge>,
    /// Row-major `n × n` vertex distances.
    dist: Vec<f64>,
    /// `toward[t * n + s]` is the (vertex, edge) one hop from `s` toward `t`.
    toward: Vec<(usize, usize)>,
    /// Canonical representation of each vertex.
    vertex_rep: Vec<TreePoint>,
}

impl MetricTree {
    /// Builds a tree from vertex labels and `(u, v, length)` edges.
    pub fn new<S, E>(vertices: impl IntoIterator<Item = S>, edges: impl IntoIterator<Item = (E, E, f64)>) -> Result<Self>
    where
        S: Into<String>,
        E: AsRef<str>,
    {
        let labels: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::domain(alloc::format!("duplicate vertex id {l:?}")));
            }
        }
        let mut list = Vec::new();
        for (a, b, length) in edges {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::domain(alloc::format!("edge references unknown vertex {s:?}")))
            };
            let (u, v) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if u == v {
                return Err(Error::domain("self-loop edge"));
            }
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::domain(alloc::format!("edge length {length} must be positive and finite")));
            }
            list.push(Edge { u, v, length });
        }
        Self::build(labels, index, list)
    }

    fn build(labels: Vec<String>, index: BTreeMap<String, usize>, edges: Vec<Edge>) -> Result<Self> {
        let n = labels.len();
        if edges.is_empty() {
            return Err(Error::domain("a metric tree needs at least one edge"));
        }
        if edges.len() + 1 != n {
            return Err(Error::domain(alloc::format!(
                "{} vertices and {} edges cannot form a tree",
                n,
                edges.len()
            )));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        let mut dist = vec![f64::NAN; n * n];
        let mut toward = vec![(usize::MAX, usize::MAX); n * n];
        for root in 0..n {
            let row = root * n;
            dist[row + root] = 0.0;
            toward[row + root] = (root, usize::MAX);
            let mut stack = vec![root];
            let mut seen = 1;
            while let Some(s) = stack.pop() {
                for &(w, e) in &adj[s] {
                    if dist[row + w].is_nan() {
                        dist[row + w] = dist[row + s] + edges[e].length;
                        // one hop from w toward root goes back through s
                        toward[row + w] = (s, e);
                        seen += 1;
                        stack.push(w);
                    }
                }
            }
            if seen != n {
                return Err(Error::domain("edge list is not connected"));
            }
        }
        let vertex_rep = (0..n)
            .map(|v| {
                let e = adj[v].iter().map(|&(_, e)| e).min().expect("connected tree with an edge");
                let offset = if edges[e].u == v { 0.0 } else { edges[e].length };
                TreePoint { edge: e, offset }
            })
            .collect();
        Ok(MetricTree {
            labels,
            index,
            edges,
            dist,
            toward,
            vertex_rep,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// `(u, v, length)` of edge `e`.
    pub fn edge(&self, e: usize) -> (usize, usize, f64) {
        let ed = self.edges[e];
        (ed.u, ed.v, ed.length)
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edges[e].length
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.vertex_count() + b]
    }

    pub fn vertex_point(&self, v: usize) -> TreePoint {
        self.vertex_rep[v]
    }

    /// The point at `offset` along edge `edge`, canonicalized.
    pub fn point(&self, edge: usize, offset: f64) -> Result<TreePoint> {
        let Some(e) = self.edges.get(edge) else {
            return Err(Error::domain(alloc::format!("edge {edge} out of range")));
        };
        if !(offset >= 0.0 && offset <= e.length) {
            return Err(Error::domain(alloc::format!(
                "offset {offset} outside [0, {}] on edge {edge}",
                e.length
            )));
        }
        Ok(self.canonical(edge, offset))
    }

    /// Returns the vertex a point sits on, if any.
    pub fn vertex_at(&self, p: &TreePoint) -> Option<usize> {
        let e = self.edges[p.edge];
        if p.offset == 0.0 {
            Some(e.u)
        } else if p.offset == e.length {
            Some(e.v)
        } else {
            None
        }
    }

    pub(crate) fn validate(&self, p: &TreePoint) -> Result<()> {
        let canon = self.point(p.edge, p.offset)?;
        if canon != *p {
            return Err(Error::domain("tree point is not in canonical form"));
        }
        Ok(())
    }

    fn canonical(&self, edge: usize, offset: f64) -> TreePoint {
        let e = self.edges[edge];
        if offset <= 0.0 {
            self.vertex_rep[e.u]
        } else if offset >= e.length {
            self.vertex_rep[e.v]
        } else {
            TreePoint { edge, offset }
        }
    }

    fn hop(&self, from: usize, to: usize) -> (usize, usize) {
        self.toward[to * self.vertex_count() + from]
    }

    /// Exit vertex on `p`'s edge, entry vertex on `q`'s edge and the
    /// corresponding leg lengths, for points on different edges.
    fn route(&self, p: &TreePoint, q: &TreePoint) -> (usize, f64, usize, f64) {
        let (ep, eq) = (self.edges[p.edge], self.edges[q.edge]);
        let ends_p = [(ep.u, p.offset), (ep.v, ep.length - p.offset)];
        let ends_q = [(eq.u, q.offset), (eq.v, eq.length - q.offset)];
        let mut best = (0, 0.0, 0, 0.0);
        let mut best_len = f64::INFINITY;
        for &(a, la) in &ends_p {
            for &(b, lb) in &ends_q {
                let len = la + self.vertex_distance(a, b) + lb;
                if len < best_len {
                    best_len = len;
                    best = (a, la, b, lb);
                }
            }
        }
        best
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> f64 {
        if p.edge == q.edge {
            return abs(p.offset - q.offset);
        }
        let (a, la, b, lb) = self.route(p, q);
        la + self.vertex_distance(a, b) + lb
    }

    /// Point at arc-length fraction `t` of the unique geodesic from `p` to `q`.
    pub fn interpolate(&self, p: &TreePoint, q: &TreePoint, t: f64) -> TreePoint {
        if t == 0.0 {
            return *p;
        }
        if t == 1.0 {
            return *q;
        }
        if p.edge == q.edge {
            let o = (1.0 - t) * p.offset + t * q.offset;
            return self.canonical(p.edge, o);
        }
        let (a, la, b, lb) = self.route(p, q);
        let total = la + self.vertex_distance(a, b) + lb;
        let mut s = t * total;
        if s <= la {
            let ep = self.edges[p.edge];
            let o = if a == ep.u { p.offset - s } else { p.offset + s };
            return self.canonical(p.edge, o.clamp(0.0, ep.length));
        }
        s -= la;
        let mut cur = a;
        while cur != b {
            let (next, e) = self.hop(cur, b);
            let ed = self.edges[e];
            if s <= ed.length {
                let o = if cur == ed.u { s } else { ed.length - s };
                return self.canonical(e, o.clamp(0.0, ed.length));
            }
            s -= ed.length;
            cur = next;
        }
        let eq = self.edges[q.edge];
        let s = s.min(lb);
        let o = if b == eq.u { s } else { eq.length - s };
        self.canonical(q.edge, o.clamp(0.0, eq.length))
    }
}
