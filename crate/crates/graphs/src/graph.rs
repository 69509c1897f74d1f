//! Metric graphs with exact rational edge lengths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use gromon_core::scalar::{parse_rational, qi, Rational};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{GraphError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Rational,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GraphOptions {
    /// Keep vertices of degree 2 instead of rejecting them.
    pub allow_degree_two: bool,
}

/// A connected metric graph. Loops and parallel edges are allowed; the
/// measure is length measure normalized by the total length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    n: usize,
    edges: Vec<Edge>,
    // (edge, other end) per node; a loop appears twice
    adj: Vec<Vec<(usize, usize)>>,
    tree: bool,
    total: Rational,
}

impl MetricGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, Rational)>) -> Result<Self> {
        Self::with_options(n, edges, GraphOptions::default())
    }

    pub fn with_options(n: usize, edges: Vec<(usize, usize, Rational)>, opts: GraphOptions) -> Result<Self> {
        if n == 0 || edges.is_empty() {
            return Err(GraphError::InvalidGraph("a metric graph needs at least one edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        let mut total = qi(0);
        for (k, (u, v, len)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::InvalidGraph(format!("edge {k} has an endpoint out of range")));
            }
            if len <= qi(0) {
                return Err(GraphError::InvalidGraph(format!("edge {k} has nonpositive length {len}")));
            }
            adj[u].push((k, v));
            adj[v].push((k, u));
            total += &len;
            out.push(Edge { u, v, len });
        }
        for (v, a) in adj.iter().enumerate() {
            if a.is_empty() {
                return Err(GraphError::InvalidGraph(format!("node {v} is isolated")));
            }
            if a.len() == 2 && !opts.allow_degree_two {
                return Err(GraphError::InvalidGraph(format!("node {v} has degree 2 and must be smoothed")));
            }
        }
        // connectivity
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::InvalidGraph("graph is not connected".into()));
        }
        let tree = out.len() + 1 == n;
        Ok(MetricGraph { n, edges: out, adj, tree, total })
    }

    /// One node carrying a loop of length `len`.
    pub fn circle(len: Rational) -> Result<Self> {
        Self::with_options(1, vec![(0, 0, len)], GraphOptions { allow_degree_two: true })
    }

    /// A single edge.
    pub fn path(len: Rational) -> Result<Self> {
        Self::new(2, vec![(0, 1, len)])
    }

    /// The star with one edge per length, center 0.
    pub fn star(lengths: &[Rational]) -> Result<Self> {
        Self::new(lengths.len() + 1, lengths.iter().enumerate().map(|(i, l)| (0, i + 1, l.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Incident (edge, other end) pairs; loops are listed twice.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_tree(&self) -> bool {
        self.tree
    }

    pub fn total_length(&self) -> &Rational {
        &self.total
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn shortest_edge(&self) -> &Rational {
        self.edges.iter().map(|e| &e.len).min().unwrap()
    }

    /// Same graph with every length multiplied by `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.len *= c;
        }
        g.total *= c;
        g
    }

    pub fn require_tree(&self) -> Result<()> {
        if self.tree {
            Ok(())
        } else {
            Err(GraphError::NotATree(format!("{} nodes and {} edges", self.n, self.edges.len())))
        }
    }

    /// Exact distances from `x` to every node.
    pub fn node_distances(&self, x: &GraphPoint) -> Vec<Option<Rational>> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.n];
        let mut heap = BinaryHeap::new();
        let mut seed = |v: usize, d: Rational, dist: &mut Vec<Option<Rational>>| {
            if dist[v].as_ref().is_none_or(|old| d < *old) {
                dist[v] = Some(d.clone());
                heap.push(Reverse((d, v)));
            }
        };
        match x {
            GraphPoint::Node(v) => seed(*v, qi(0), &mut dist),
            GraphPoint::Edge { edge, offset } => {
                let e = &self.edges[*edge];
                seed(e.u, offset.clone(), &mut dist);
                seed(e.v, &e.len - offset, &mut dist);
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].as_ref().is_some_and(|best| d > *best) {
                continue;
            }
            for &(k, w) in &self.adj[v] {
                let nd = &d + &self.edges[k].len;
                if dist[w].as_ref().is_none_or(|old| nd < *old) {
                    dist[w] = Some(nd.clone());
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }

    /// Exact distances from `x` to every node of a connected graph.
    pub fn distances_from(&self, x: &GraphPoint) -> Vec<Rational> {
        self.node_distances(x).into_iter().map(|d| d.expect("graph is connected")).collect()
    }

    /// All node-to-node distances.
    pub fn node_distance_matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|v| self.distances_from(&GraphPoint::Node(v))).collect()
    }

    pub fn point(&self, edge: usize, offset: Rational) -> Result<GraphPoint> {
        GraphPoint::on_edge(self, edge, offset)
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> =
            self.edges.iter().map(|e| json!({"u": e.u, "v": e.v, "len": e.len.to_string()})).collect();
        json!({"nodes": self.n, "edges": edges})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("nodes")
            .and_then(Value::as_u64)
            .ok_or_else(|| GraphError::Parse("`nodes` must be a nonnegative integer".into()))? as usize;
        let edges = v.get("edges").and_then(Value::as_array).ok_or_else(|| GraphError::Parse("`edges` must be an array".into()))?;
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            let end = |k: &str| {
                e.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| GraphError::Parse(format!("edge field `{k}` missing")))
            };
            let len = match e.get("len") {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(x)) if x.is_u64() => qi(x.as_u64().unwrap() as i64),
                _ => return Err(GraphError::Parse("edge length must be a \"p/q\" string".into())),
            };
            out.push((end("u")?, end("v")?, len));
        }
        let allow_degree_two = n == 1 && out.len() == 1;
        Self::with_options(n, out, GraphOptions { allow_degree_two })
    }
}

/// A point of a metric graph: a node, or a point strictly inside an edge at
/// `offset` from the edge's `u` end.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphPoint {
    Node(usize),
    Edge { edge: usize, offset: Rational },
}

impl GraphPoint {
    /// Endpoint offsets become node points.
    pub fn on_edge(g: &MetricGraph, edge: usize, offset: Rational) -> Result<Self> {
        let e = g.edges.get(edge).ok_or_else(|| GraphError::InvalidPoint(format!("no edge {edge}")))?;
        if offset < qi(0) || offset > e.len {
            return Err(GraphError::InvalidPoint(format!("offset {offset} outside [0, {}]", e.len)));
        }
        Ok(if offset.is_zero() {
            GraphPoint::Node(e.u)
        } else if offset == e.len {
            GraphPoint::Node(e.v)
        } else {
            GraphPoint::Edge { edge, offset }
        })
    }
}

/// Exact geodesic distance between two points.
pub fn graph_distance(g: &MetricGraph, a: &GraphPoint, b: &GraphPoint) -> Rational {
    let d = g.distances_from(a);
    match b {
        GraphPoint::Node(v) => d[*v].clone(),
        GraphPoint::Edge { edge, offset } => {
            let e = &g.edges[*edge];
            let via_u = &d[e.u] + offset;
            let via_v = &d[e.v] + (&e.len - offset);
            let mut best = via_u.min(via_v);
            if let GraphPoint::Edge { edge: ea, offset: oa } = a {
                if ea == edge {
                    let direct = if oa > offset { oa - offset } else { offset - oa };
                    best = best.min(direct);
                }
            }
            best
        }
    }
}
