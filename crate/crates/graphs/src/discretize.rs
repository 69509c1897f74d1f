//! Finite samplings of metric graphs and maps between them.

use gromon_core::scalar::{qi, Rational};
use gromon_core::gromov::{BlockPairing, Partition};
use gromon_core::transport::StepCDF;
use gromon_core::{FiniteMMSpace, MeasurePreservingMap, SpaceOptions};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{GraphError, Result};
use crate::graph::{GraphPoint, MetricGraph};
use crate::pwl::PwlCDF;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleRule {
    /// Nodes plus the interior grid points `k·mesh`; each sample carries the
    /// length of its Voronoi cell on the edges.
    Grid,
    /// Only the cell centers `(k + ½)·mesh`, each carrying `mesh`. Symmetric
    /// under reversing any edge.
    CellCenters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampleLabel {
    Node(usize),
    /// Grid point `k` (from 1) or cell `k` (from 0), counted from the `u` end.
    Edge { edge: usize, k: usize },
}

#[derive(Clone, Debug)]
pub struct Discretization {
    pub space: FiniteMMSpace<Rational>,
    pub labels: Vec<SampleLabel>,
    pub points: Vec<GraphPoint>,
    pub mesh: Rational,
    pub rule: SampleRule,
    /// Cells or grid intervals per edge.
    pub cells: Vec<usize>,
}

impl Discretization {
    pub fn index_of(&self, label: &SampleLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Lifts a piecewise isometry to a map of samples. Both samplings must
    /// share rule and mesh.
    pub fn lift(&self, target: &Discretization, m: &GraphMorphism) -> Result<MeasurePreservingMap> {
        if self.rule != target.rule || self.mesh != target.mesh {
            return Err(GraphError::InvalidGraph("samplings differ in rule or mesh".into()));
        }
        let lookup: std::collections::HashMap<&SampleLabel, usize> = target.labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut out = Vec::with_capacity(self.labels.len());
        for l in &self.labels {
            let img = match *l {
                SampleLabel::Node(v) => SampleLabel::Node(m.nodes[v]),
                SampleLabel::Edge { edge, k } => {
                    let (e2, rev) = m.edges[edge];
                    let c = self.cells[edge];
                    let k2 = match (rev, self.rule) {
                        (false, _) => k,
                        (true, SampleRule::Grid) => c - k,
                        (true, SampleRule::CellCenters) => c - 1 - k,
                    };
                    SampleLabel::Edge { edge: e2, k: k2 }
                }
            };
            out.push(*lookup.get(&img).ok_or_else(|| GraphError::InvalidGraph(format!("no sample {img:?}")))?);
        }
        Ok(MeasurePreservingMap::new(&self.space, &target.space, out)?)
    }
}

/// Bijections of nodes and of edges, each edge carried isometrically onto its
/// image (reversed when flagged). Incidence need not be preserved, so the
/// induced map may tear the graph apart, but node degrees must match so that
/// node samples keep their mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    nodes: Vec<usize>,
    edges: Vec<(usize, bool)>,
}

impl GraphMorphism {
    pub fn new(a: &MetricGraph, b: &MetricGraph, nodes: Vec<usize>, edges: Vec<(usize, bool)>) -> Result<Self> {
        let bad = |m: String| Err(GraphError::InvalidGraph(m));
        if nodes.len() != a.n() || edges.len() != a.edges().len() || a.n() != b.n() || a.edges().len() != b.edges().len() {
            return bad("morphism sizes do not match the graphs".into());
        }
        let mut hit = vec![false; b.n()];
        for &v in &nodes {
            if v >= b.n() || std::mem::replace(&mut hit[v], true) {
                return bad("node map is not a bijection".into());
            }
        }
        let mut hit = vec![false; b.edges().len()];
        for (k, &(img, _)) in edges.iter().enumerate() {
            if img >= b.edges().len() || std::mem::replace(&mut hit[img], true) {
                return bad("edge map is not a bijection".into());
            }
            if a.edge(k).len != b.edge(img).len {
                return bad(format!("edge {k} is not carried isometrically onto edge {img}"));
            }
        }
        if let Some(v) = (0..a.n()).find(|&v| a.degree(v) != b.degree(nodes[v])) {
            return bad(format!("node {v} changes degree"));
        }
        Ok(GraphMorphism { nodes, edges })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, bool)] {
        &self.edges
    }

    /// Whether adjacency is preserved, making this a graph isomorphism.
    pub fn is_continuous(&self, a: &MetricGraph, b: &MetricGraph) -> bool {
        self.edges.iter().enumerate().all(|(k, &(img, rev))| {
            let (ea, eb) = (a.edge(k), b.edge(img));
            let ends = if rev { (eb.v, eb.u) } else { (eb.u, eb.v) };
            (self.nodes[ea.u], self.nodes[ea.v]) == ends
        })
    }
}

/// Samples on the node grid: nodes plus interior points at multiples of
/// `mesh`. A single unit edge at mesh ½ gives weights (¼, ½, ¼).
pub fn discretize_graph(g: &MetricGraph, mesh: &Rational) -> Result<Discretization> {
    discretize_graph_with(g, mesh, SampleRule::Grid)
}

pub fn discretize_graph_with(g: &MetricGraph, mesh: &Rational, rule: SampleRule) -> Result<Discretization> {
    if *mesh <= qi(0) {
        return Err(GraphError::MeshMismatch(mesh.to_string()));
    }
    let mut cells = Vec::with_capacity(g.edges().len());
    for e in g.edges() {
        let c = &e.len / mesh;
        if !c.is_integer() {
            return Err(GraphError::MeshMismatch(mesh.to_string()));
        }
        cells.push(c.to_integer().to_usize().unwrap());
    }
    let total = g.total_length();
    let mut labels = Vec::new();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let half = qi(1) / qi(2);
    if rule == SampleRule::Grid {
        for v in 0..g.n() {
            labels.push(SampleLabel::Node(v));
            points.push(GraphPoint::Node(v));
            weights.push(qi(g.degree(v) as i64) * mesh * &half / total);
        }
    }
    for (edge, &c) in cells.iter().enumerate() {
        let ks: Vec<usize> = match rule {
            SampleRule::Grid => (1..c).collect(),
            SampleRule::CellCenters => (0..c).collect(),
        };
        for k in ks {
            let off = match rule {
                SampleRule::Grid => qi(k as i64) * mesh,
                SampleRule::CellCenters => (qi(k as i64) + &half) * mesh,
            };
            labels.push(SampleLabel::Edge { edge, k });
            points.push(GraphPoint::Edge { edge, offset: off });
            weights.push(mesh / total);
        }
    }
    let dn = g.node_distance_matrix();
    let ends = |p: &GraphPoint| -> Vec<(usize, Rational)> {
        match p {
            GraphPoint::Node(v) => vec![(*v, qi(0))],
            GraphPoint::Edge { edge, offset } => {
                let e = g.edge(*edge);
                vec![(e.u, offset.clone()), (e.v, &e.len - offset)]
            }
        }
    };
    let pe: Vec<Vec<(usize, Rational)>> = points.iter().map(ends).collect();
    let n = points.len();
    let rows: Vec<Vec<Rational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return qi(0);
                    }
                    let mut best: Option<Rational> = None;
                    for (a, da) in &pe[i] {
                        for (b, db) in &pe[j] {
                            let d = da + &dn[*a][*b] + db;
                            if best.as_ref().is_none_or(|x| d < *x) {
                                best = Some(d);
                            }
                        }
                    }
                    if let (GraphPoint::Edge { edge: e1, offset: o1 }, GraphPoint::Edge { edge: e2, offset: o2 }) = (&points[i], &points[j]) {
                        if e1 == e2 {
                            let direct = if o1 > o2 { o1 - o2 } else { o2 - o1 };
                            best = best.map(|x| x.min(direct));
                        }
                    }
                    best.unwrap()
                })
                .collect()
        })
        .collect();
    let space = FiniteMMSpace::with_options(rows, weights, SpaceOptions { pseudo: false, check_triangle: false, tol: 0.0 })?;
    Ok(Discretization { space, labels, points, mesh: mesh.clone(), rule, cells })
}

/// Edge partitions of two cell-center samplings with ordered edge pairs matched
/// by `(same edge, separation, lengths)`. Under cell-center sampling the
/// distances between two edges depend only on that key, so a complete match
/// certifies equal global distributions. `None` when the key multisets differ.
pub fn edge_partition_witness(
    a: &MetricGraph,
    b: &MetricGraph,
    da: &Discretization,
    db: &Discretization,
) -> Result<Option<(Partition, Partition, BlockPairing)>> {
    if da.rule != SampleRule::CellCenters || db.rule != SampleRule::CellCenters {
        return Err(GraphError::InvalidGraph("edge partitions need cell-center sampling".into()));
    }
    let part = |d: &Discretization| -> Result<Partition> {
        let labels = d
            .labels
            .iter()
            .map(|l| match l {
                SampleLabel::Edge { edge, .. } => *edge,
                SampleLabel::Node(_) => unreachable!("cell centers never sit on nodes"),
            })
            .collect();
        Ok(Partition::new(labels)?)
    };
    type Key = (bool, Rational, Rational, Rational);
    let keys = |g: &MetricGraph| -> Vec<(Key, usize, usize)> {
        let dn = g.node_distance_matrix();
        let m = g.edges().len();
        let mut out = Vec::with_capacity(m * m);
        for (i, e) in g.edges().iter().enumerate() {
            for (j, f) in g.edges().iter().enumerate() {
                let sep = [e.u, e.v].iter().flat_map(|&x| [f.u, f.v].map(|y| dn[x][y].clone())).min().unwrap();
                out.push(((i != j, sep, e.len.clone(), f.len.clone()), i, j));
            }
        }
        out.sort();
        out
    };
    let (ka, kb) = (keys(a), keys(b));
    if ka.len() != kb.len() || ka.iter().zip(&kb).any(|(x, y)| x.0 != y.0) {
        return Ok(None);
    }
    let pairs = ka.iter().zip(&kb).map(|(x, y)| (x.1, x.2, y.1, y.2)).collect();
    Ok(Some((part(da)?, part(db)?, BlockPairing { pairs })))
}

/// `sup_r |F(r) − h(r)|` for a step distribution `F` and a continuous `h`.
pub fn sup_distance(f: &StepCDF<Rational>, h: &PwlCDF) -> Rational {
    let mut best = qi(0);
    let mut prev = qi(0);
    let abs = |x: Rational| if x < qi(0) { -x } else { x };
    for (r, v) in f.breakpoints().iter().zip(f.values()) {
        let hr = h.eval(r);
        best = best.max(abs(&prev - &hr)).max(abs(v - &hr));
        prev = v.clone();
    }
    // after the last atom F = 1 and h only rises towards 1
    debug_assert!(prev == qi(1) || prev.is_zero());
    best
}
