//! Fixture and random tree generators.

use gromon_core::scalar::{q, qi, Rational};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::discretize::GraphMorphism;
use crate::error::{GraphError, Result};
use crate::graph::{GraphOptions, GraphPoint, MetricGraph};

/// Branch counts of the two three-lobe trees with equal node-level local
/// distributions (rows A, B, C).
pub const LOBE_MATRIX_1: [[u32; 3]; 3] = [[5, 10, 5], [3, 3, 14], [1, 7, 12]];
pub const LOBE_MATRIX_2: [[u32; 3]; 3] = [[5, 14, 1], [3, 7, 10], [5, 3, 12]];

/// Lobe `(i, j)` of the first tree goes to lobe `LOBE_BLOCK_MAP[i][j]` of the
/// second.
pub const LOBE_BLOCK_MAP: [[(usize, usize); 3]; 3] =
    [[(0, 0), (1, 2), (2, 0)], [(1, 0), (2, 1), (0, 1)], [(0, 2), (1, 1), (2, 2)]];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lobe {
    pub count: u32,
    /// Edge from the row node outward (`u` is the row node).
    pub stem: usize,
    /// The branching node; absent for a single branch, which is smoothed into
    /// one edge of length 2.
    pub hub: Option<usize>,
    /// Edges from the hub to the leaves (`u` is the hub).
    pub branches: Vec<usize>,
    pub leaves: Vec<usize>,
}

/// A center joined by unit edges to three row nodes, each carrying three lobes:
/// a unit stem to a hub with `count` unit leaf edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LobeTree {
    pub graph: MetricGraph,
    pub matrix: [[u32; 3]; 3],
    pub center: usize,
    pub rows: [usize; 3],
    /// Edge center → row node.
    pub spokes: [usize; 3],
    pub lobes: Vec<Vec<Lobe>>,
}

pub fn lobe_tree(matrix: [[u32; 3]; 3]) -> Result<LobeTree> {
    if matrix.iter().flatten().any(|&c| c == 0) {
        return Err(GraphError::InvalidGraph("lobe counts must be positive".into()));
    }
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let center = 0;
    let rows = [1, 2, 3];
    let mut next = 4;
    let mut spokes = [0; 3];
    for (x, &r) in rows.iter().enumerate() {
        spokes[x] = edges.len();
        edges.push((center, r, qi(1)));
    }
    let mut lobes = Vec::new();
    for (x, row) in matrix.iter().enumerate() {
        let mut out = Vec::new();
        for &count in row {
            let stem = edges.len();
            if count == 1 {
                edges.push((rows[x], next, qi(2)));
                out.push(Lobe { count, stem, hub: None, branches: vec![], leaves: vec![next] });
                next += 1;
                continue;
            }
            let hub = next;
            next += 1;
            edges.push((rows[x], hub, qi(1)));
            let mut branches = Vec::new();
            let mut leaves = Vec::new();
            for _ in 0..count {
                branches.push(edges.len());
                edges.push((hub, next, qi(1)));
                leaves.push(next);
                next += 1;
            }
            out.push(Lobe { count, stem, hub: Some(hub), branches, leaves });
        }
        lobes.push(out);
    }
    let graph = MetricGraph::new(next, edges)?;
    Ok(LobeTree { graph, matrix, center, rows, spokes, lobes })
}

/// The isometry-per-piece map that is the identity on the center, spokes and
/// row nodes and carries lobe `(i, j)` of `a` onto lobe `block[i][j]` of `b`.
pub fn lobe_correspondence(a: &LobeTree, b: &LobeTree, block: &[[(usize, usize); 3]; 3]) -> Result<GraphMorphism> {
    let mut nodes = vec![usize::MAX; a.graph.n()];
    let mut edges = vec![(usize::MAX, false); a.graph.edges().len()];
    nodes[a.center] = b.center;
    for x in 0..3 {
        nodes[a.rows[x]] = b.rows[x];
        edges[a.spokes[x]] = (b.spokes[x], false);
    }
    for (i, row) in block.iter().enumerate() {
        for (j, &(k, l)) in row.iter().enumerate() {
            let (la, lb) = (&a.lobes[i][j], &b.lobes[k][l]);
            if la.count != lb.count {
                return Err(GraphError::InvalidGraph(format!(
                    "lobe ({i},{j}) has {} branches but its image ({k},{l}) has {}",
                    la.count, lb.count
                )));
            }
            edges[la.stem] = (lb.stem, false);
            if let (Some(ha), Some(hb)) = (la.hub, lb.hub) {
                nodes[ha] = hb;
            }
            for (ea, eb) in la.branches.iter().zip(&lb.branches) {
                edges[*ea] = (*eb, false);
            }
            for (va, vb) in la.leaves.iter().zip(&lb.leaves) {
                nodes[*va] = *vb;
            }
        }
    }
    GraphMorphism::new(&a.graph, &b.graph, nodes, edges)
}

/// `s` with `t` scaled by `delta` and attached at its center to the leaf.
#[derive(Clone, Debug)]
pub struct Glued {
    pub graph: MetricGraph,
    /// Node of the glued graph for each node of `t`; the attachment point of
    /// `t` maps to the leaf when it is a node.
    pub t_nodes: Vec<usize>,
    /// For each edge of `t`, the glued edges covering it in order from its `u`
    /// end (two when the center splits it).
    pub t_edges: Vec<Vec<usize>>,
}

/// The metric center of a tree: the midpoint of a longest path.
pub fn tree_center(t: &MetricGraph) -> Result<GraphPoint> {
    t.require_tree()?;
    let far = |d: &[Rational]| (0..d.len()).max_by(|&i, &j| d[i].cmp(&d[j]).then(j.cmp(&i))).unwrap();
    let a = far(&t.distances_from(&GraphPoint::Node(0)));
    let da = t.distances_from(&GraphPoint::Node(a));
    let b = far(&da);
    let half = &da[b] / qi(2);
    // walk back from b towards a
    let db = t.distances_from(&GraphPoint::Node(b));
    let mut v = a;
    loop {
        if da[v] == half {
            return Ok(GraphPoint::Node(v));
        }
        let &(k, w) = t.incident(v).iter().find(|&&(k, w)| da[w] == &da[v] + &t.edge(k).len && db[w] < db[v]).unwrap();
        if da[w] > half {
            let e = t.edge(k);
            let off = if e.u == v { &half - &da[v] } else { &e.len - (&half - &da[v]) };
            return t.point(k, off);
        }
        v = w;
    }
}

pub fn glue_tree(s: &MetricGraph, leaf: usize, t: &MetricGraph, delta: &Rational) -> Result<Glued> {
    s.require_tree()?;
    t.require_tree()?;
    if leaf >= s.n() || s.degree(leaf) != 1 {
        return Err(GraphError::InvalidLeaf(format!("node {leaf} is not a leaf of S")));
    }
    if *delta <= qi(0) {
        return Err(GraphError::InvalidGraph("scale must be positive".into()));
    }
    let center = tree_center(t)?;
    let mut edges: Vec<(usize, usize, Rational)> = s.edges().iter().map(|e| (e.u, e.v, e.len.clone())).collect();
    let mut next = s.n();
    let mut t_nodes = vec![usize::MAX; t.n()];
    for (v, slot) in t_nodes.iter_mut().enumerate() {
        if center == GraphPoint::Node(v) {
            *slot = leaf;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let mut t_edges = Vec::with_capacity(t.edges().len());
    for (k, e) in t.edges().iter().enumerate() {
        let (u, v) = (t_nodes[e.u], t_nodes[e.v]);
        match &center {
            GraphPoint::Edge { edge, offset } if *edge == k => {
                t_edges.push(vec![edges.len(), edges.len() + 1]);
                edges.push((u, leaf, offset * delta));
                edges.push((leaf, v, (&e.len - offset) * delta));
            }
            _ => {
                t_edges.push(vec![edges.len()]);
                edges.push((u, v, &e.len * delta));
            }
        }
    }
    let graph = MetricGraph::new(next, edges)?;
    Ok(Glued { graph, t_nodes, t_edges })
}

/// Composes two glued trees built on the same `s` and leaf with a morphism
/// between the attached trees (whose centers must both be nodes).
pub fn glued_correspondence(a: &Glued, b: &Glued, m: &GraphMorphism) -> Result<GraphMorphism> {
    let mut nodes: Vec<usize> = (0..a.graph.n()).collect();
    let mut edges: Vec<(usize, bool)> = (0..a.graph.edges().len()).map(|k| (k, false)).collect();
    for (v, &img) in m.nodes().iter().enumerate() {
        nodes[a.t_nodes[v]] = b.t_nodes[img];
    }
    for (k, &(img, rev)) in m.edges().iter().enumerate() {
        if a.t_edges[k].len() != 1 || b.t_edges[img].len() != 1 {
            return Err(GraphError::InvalidGraph("attachment centers must be nodes".into()));
        }
        edges[a.t_edges[k][0]] = (b.t_edges[img][0], rev);
    }
    GraphMorphism::new(&a.graph, &b.graph, nodes, edges)
}

/// Appends a leaf edge of length `len` at `x`; an interior point becomes a
/// degree-3 node splitting its edge.
pub fn append_leaf(g: &MetricGraph, x: &GraphPoint, len: Rational) -> Result<MetricGraph> {
    let mut edges: Vec<(usize, usize, Rational)> = g.edges().iter().map(|e| (e.u, e.v, e.len.clone())).collect();
    let mut n = g.n();
    let at = match x {
        GraphPoint::Node(v) => {
            if g.degree(*v) == 1 {
                return Err(GraphError::InvalidLeaf("appending at a leaf would leave a degree-2 node".into()));
            }
            *v
        }
        GraphPoint::Edge { edge, offset } => {
            let e = g.edge(*edge).clone();
            let m = n;
            n += 1;
            edges[*edge] = (e.u, m, offset.clone());
            edges.push((m, e.v, &e.len - offset));
            m
        }
    };
    edges.push((at, n, len));
    MetricGraph::new(n + 1, edges)
}

/// Two unit-edge trees on 15 nodes with the same degree sequence whose
/// global distance distributions coincide (witnessed by an edge partition).
pub fn global_twin_trees() -> (MetricGraph, MetricGraph) {
    let unit = |es: &[(usize, usize)]| MetricGraph::new(15, es.iter().map(|&(u, v)| (u, v, qi(1))).collect()).unwrap();
    let t1 = unit(&[
        (0, 8),
        (0, 11),
        (0, 14),
        (1, 0),
        (1, 2),
        (1, 7),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 6),
        (8, 9),
        (8, 10),
        (11, 12),
        (11, 13),
    ]);
    let t2 = unit(&[
        (0, 8),
        (0, 13),
        (0, 14),
        (1, 0),
        (1, 2),
        (1, 5),
        (2, 3),
        (2, 4),
        (5, 6),
        (5, 7),
        (8, 9),
        (8, 10),
        (8, 11),
        (8, 12),
    ]);
    (t1, t2)
}

/// Distinct edge lengths `k/60` with `k` drawn without replacement from
/// `30..=180`.
pub fn distinct_lengths<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Rational> {
    let mut pool: Vec<i64> = (30..=180).collect();
    pool.shuffle(rng);
    pool.into_iter().take(count).map(|k| q(k, 60)).collect()
}

/// Combinatorial tree grown from the 3-star by splitting leaves into two and
/// adding leaves at branch nodes, with about `max_edges` edges.
pub fn random_tree_shape<R: Rng + ?Sized>(rng: &mut R, max_edges: usize) -> Vec<(usize, usize)> {
    let target = rng.random_range(3..=max_edges.max(3));
    let mut edges = vec![(0, 1), (0, 2), (0, 3)];
    let mut deg = vec![3, 1, 1, 1];
    while edges.len() < target {
        let n = deg.len();
        if edges.len() + 2 <= target && rng.random_bool(0.5) {
            let leaves: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
            let &v = leaves.choose(rng).unwrap();
            edges.push((v, n));
            edges.push((v, n + 1));
            deg[v] += 2;
            deg.extend([1, 1]);
        } else {
            let inner: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
            let &v = inner.choose(rng).unwrap();
            edges.push((v, n));
            deg[v] += 1;
            deg.push(1);
        }
    }
    edges
}

/// Random tree with at most `max_edges` edges and pairwise distinct lengths.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, max_edges: usize) -> MetricGraph {
    let shape = random_tree_shape(rng, max_edges);
    let lens = distinct_lengths(rng, shape.len());
    let n = shape.len() + 1;
    MetricGraph::new(n, shape.into_iter().zip(lens).map(|((u, v), l)| (u, v, l)).collect()).unwrap()
}

/// Random tree with lengths from `1..=3` in steps of `1/4`, plus up to
/// `extra` edges (loops and parallel edges allowed) between branch nodes.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_edges: usize, extra: usize) -> MetricGraph {
    let shape = random_tree_shape(rng, max_edges);
    let n = shape.len() + 1;
    let mut deg = vec![0usize; n];
    for &(u, v) in &shape {
        deg[u] += 1;
        deg[v] += 1;
    }
    let inner: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    let mut edges: Vec<(usize, usize, Rational)> = shape.into_iter().map(|(u, v)| (u, v, q(rng.random_range(4..=12), 4))).collect();
    for _ in 0..rng.random_range(0..=extra) {
        let u = *inner.choose(rng).unwrap();
        let v = *inner.choose(rng).unwrap();
        edges.push((u, v, q(rng.random_range(4..=12), 4)));
    }
    MetricGraph::with_options(n, edges, GraphOptions::default()).unwrap()
}
