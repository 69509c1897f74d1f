//! Merge trees `T^x` of `f(y) = −d_T(x, y)` on metric trees, brute-force
//! ε-interleaving at desk scale, and `Δ(T, S)`.
//!
//! A point of a merge tree is `(c, h)`: height `h` on the edge from node `c`
//! up to its parent (or on the stem above the root), with `c` the lowest such
//! node. An ε-morphism commutes with the upward shift, so it is fixed by
//! where it sends the leaves, and it is well defined exactly when any two
//! leaves agree once shifted to their merge height plus ε. The round-trip
//! identities likewise only need checking on leaves. Enumerating leaf images
//! over the points at the right height therefore covers every interleaving.

use std::collections::BTreeSet;

use gromon_core::scalar::{parse_rational, qi, Rational};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{GraphError, Result};
use crate::graph::{GraphPoint, MetricGraph};
use crate::volume::NodeMultiset;

pub const DEFAULT_MERGE_GUARD: usize = 14;

/// Largest subset-sum set built for the locality threshold.
pub const SUM_SET_LIMIT: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeTree {
    parent: Vec<Option<usize>>,
    height: Vec<Rational>,
    children: Vec<Vec<usize>>,
    root: usize,
    // some leaf below each node
    leaf_below: Vec<usize>,
}

impl MergeTree {
    pub fn new(parent: Vec<Option<usize>>, height: Vec<Rational>) -> Result<Self> {
        let n = parent.len();
        let bad = |m: &str| Err(GraphError::InvalidGraph(format!("merge tree: {m}")));
        if n == 0 || height.len() != n {
            return bad("parent and height arrays must be nonempty and equal in length");
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return bad("exactly one root required");
        }
        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || height[i] >= height[p] {
                    return bad("every child must lie strictly below its parent");
                }
                children[p].push(i);
            }
        }
        // heights strictly increase upward, so following parents always ends
        let root = roots[0];
        let mut leaf_below = vec![usize::MAX; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| height[a].cmp(&height[b]));
        for &v in &order {
            if children[v].is_empty() {
                leaf_below[v] = v;
            } else {
                leaf_below[v] = leaf_below[children[v][0]];
            }
        }
        Ok(MergeTree { parent, height, children, root, leaf_below })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn height(&self, v: usize) -> &Rational {
        &self.height[v]
    }

    pub fn heights(&self) -> &[Rational] {
        &self.height
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.children[v].is_empty()).collect()
    }

    /// The point `σ^t` above `(c, h)`, at height `t >= h`.
    fn ancestor(&self, c: usize, t: &Rational) -> MPoint {
        let mut c = c;
        while let Some(p) = self.parent[c] {
            if self.height[p] <= *t {
                c = p;
            } else {
                break;
            }
        }
        MPoint { node: c, h: t.clone() }
    }

    /// Every point at height `t`.
    fn points_at(&self, t: &Rational) -> Vec<MPoint> {
        (0..self.len())
            .filter(|&c| self.height[c] <= *t && self.parent[c].is_none_or(|p| self.height[p] > *t))
            .map(|c| MPoint { node: c, h: t.clone() })
            .collect()
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        let mut up = vec![false; self.len()];
        let mut v = Some(a);
        while let Some(x) = v {
            up[x] = true;
            v = self.parent[x];
        }
        let mut v = b;
        while !up[v] {
            v = self.parent[v].unwrap();
        }
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parent": self.parent,
            "height": self.height.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let parent = v
            .get("parent")
            .and_then(Value::as_array)
            .ok_or_else(|| GraphError::Parse("`parent` must be an array".into()))?
            .iter()
            .map(|p| match p {
                Value::Null => Ok(None),
                _ => p.as_u64().map(|x| Some(x as usize)).ok_or_else(|| GraphError::Parse("bad parent entry".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let height = v
            .get("height")
            .and_then(Value::as_array)
            .ok_or_else(|| GraphError::Parse("`height` must be an array".into()))?
            .iter()
            .map(|h| h.as_str().ok_or_else(|| GraphError::Parse("heights are \"p/q\" strings".into())).and_then(|s| Ok(parse_rational(s)?)))
            .collect::<Result<Vec<_>>>()?;
        MergeTree::new(parent, height)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct MPoint {
    node: usize,
    h: Rational,
}

/// `T^x`: nodes of `T` at heights `−d(x, ·)`, rooted at `x`, or at the neighbour
/// of `x` when `x` is a leaf (the leaf then lies on the stem).
pub fn merge_tree(t: &MetricGraph, x: usize) -> Result<MergeTree> {
    t.require_tree()?;
    if x >= t.n() {
        return Err(GraphError::InvalidPoint(format!("no node {x}")));
    }
    let d = t.distances_from(&GraphPoint::Node(x));
    let root = if t.degree(x) == 1 { t.incident(x)[0].1 } else { x };
    let mut id = vec![usize::MAX; t.n()];
    let mut parent = Vec::new();
    let mut height = Vec::new();
    id[root] = 0;
    parent.push(None);
    height.push(-d[root].clone());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &(_, w) in t.incident(v) {
            if w == x && x != root || id[w] != usize::MAX {
                continue;
            }
            id[w] = parent.len();
            parent.push(Some(id[v]));
            height.push(-d[w].clone());
            stack.push(w);
        }
    }
    MergeTree::new(parent, height)
}

/// `Λ₁,₁ ∪ Λ₁,₂ ∪ Λ₂,₂`: half differences of node heights within each tree and
/// full differences across.
pub fn candidate_set(a: &MergeTree, b: &MergeTree) -> BTreeSet<Rational> {
    let abs = |x: Rational| if x < qi(0) { -x } else { x };
    let half = qi(1) / qi(2);
    let mut out = BTreeSet::new();
    for t in [a, b] {
        for u in t.heights() {
            for v in t.heights() {
                out.insert(abs(u - v) * &half);
            }
        }
    }
    for u in a.heights() {
        for v in b.heights() {
            out.insert(abs(u - v));
        }
    }
    out
}

fn check_guard(a: &MergeTree, b: &MergeTree, guard: usize) -> Result<()> {
    if a.len() + b.len() > guard {
        return Err(GraphError::SizeLimitExceeded(format!("{} merge-tree nodes exceed the guard {guard}", a.len() + b.len())));
    }
    Ok(())
}

struct Search<'a> {
    f: &'a MergeTree,
    g: &'a MergeTree,
    eps: Rational,
    two_eps: Rational,
    f_leaves: Vec<usize>,
    g_leaves: Vec<usize>,
    f_cands: Vec<Vec<MPoint>>,
    g_cands: Vec<Vec<MPoint>>,
}

impl Search<'_> {
    /// Leaf images are consistent with the earlier leaves at every merge height.
    fn consistent(t: &MergeTree, target: &MergeTree, leaves: &[usize], imgs: &[MPoint], eps: &Rational) -> bool {
        let i = imgs.len() - 1;
        (0..i).all(|j| {
            let a = t.lca(leaves[i], leaves[j]);
            let h = t.height(a) + eps;
            target.ancestor(imgs[i].node, &h) == target.ancestor(imgs[j].node, &h)
        })
    }

    /// Image of any point under the morphism given by leaf images.
    fn apply(t: &MergeTree, target: &MergeTree, leaf_pos: &[Option<usize>], imgs: &[MPoint], p: &MPoint, eps: &Rational) -> Option<MPoint> {
        let l = t.leaf_below[p.node];
        let k = leaf_pos[l]?;
        let img = imgs.get(k)?;
        Some(target.ancestor(img.node, &(&p.h + eps)))
    }

    fn run(&self) -> bool {
        let mut phi = Vec::new();
        self.phi_dfs(&mut phi)
    }

    fn phi_dfs(&self, phi: &mut Vec<MPoint>) -> bool {
        let i = phi.len();
        if i == self.f_leaves.len() {
            let mut psi = Vec::new();
            return self.psi_dfs(phi, &mut psi);
        }
        for c in &self.f_cands[i] {
            phi.push(c.clone());
            if Self::consistent(self.f, self.g, &self.f_leaves, phi, &self.eps) && self.phi_dfs(phi) {
                return true;
            }
            phi.pop();
        }
        false
    }

    fn psi_dfs(&self, phi: &[MPoint], psi: &mut Vec<MPoint>) -> bool {
        let i = psi.len();
        if i == self.g_leaves.len() {
            return self.round_trips(phi, psi);
        }
        for c in &self.g_cands[i] {
            psi.push(c.clone());
            if Self::consistent(self.g, self.f, &self.g_leaves, psi, &self.eps) && self.partial_ok(phi, psi) && self.psi_dfs(phi, psi) {
                return true;
            }
            psi.pop();
        }
        false
    }

    fn positions(t: &MergeTree, leaves: &[usize]) -> Vec<Option<usize>> {
        let mut pos = vec![None; t.len()];
        for (k, &l) in leaves.iter().enumerate() {
            pos[l] = Some(k);
        }
        pos
    }

    /// `φψ = σ^{2ε}` on the newest leaf of `g`, and `ψφ = σ^{2ε}` on the
    /// leaves of `f` whose images are already decided.
    fn partial_ok(&self, phi: &[MPoint], psi: &[MPoint]) -> bool {
        let fpos = Self::positions(self.f, &self.f_leaves);
        let gpos = Self::positions(self.g, &self.g_leaves);
        let i = psi.len() - 1;
        let m = self.g_leaves[i];
        let back = Self::apply(self.f, self.g, &fpos, phi, &psi[i], &self.eps).unwrap();
        if back != self.g.ancestor(m, &(self.g.height(m) + &self.two_eps)) {
            return false;
        }
        for (k, &l) in self.f_leaves.iter().enumerate() {
            if let Some(p) = Self::apply(self.g, self.f, &gpos, psi, &phi[k], &self.eps) {
                if p != self.f.ancestor(l, &(self.f.height(l) + &self.two_eps)) {
                    return false;
                }
            }
        }
        true
    }

    fn round_trips(&self, phi: &[MPoint], psi: &[MPoint]) -> bool {
        let fpos = Self::positions(self.f, &self.f_leaves);
        let gpos = Self::positions(self.g, &self.g_leaves);
        self.f_leaves.iter().enumerate().all(|(k, &l)| {
            Self::apply(self.g, self.f, &gpos, psi, &phi[k], &self.eps) == Some(self.f.ancestor(l, &(self.f.height(l) + &self.two_eps)))
        }) && self.g_leaves.iter().enumerate().all(|(k, &m)| {
            Self::apply(self.f, self.g, &fpos, phi, &psi[k], &self.eps) == Some(self.g.ancestor(m, &(self.g.height(m) + &self.two_eps)))
        })
    }
}

/// Whether an ε-interleaving between the two merge trees exists.
pub fn is_interleaved(a: &MergeTree, b: &MergeTree, eps: &Rational, guard: usize) -> Result<bool> {
    check_guard(a, b, guard)?;
    if *eps < qi(0) {
        return Ok(false);
    }
    let f_leaves = a.leaves();
    let g_leaves = b.leaves();
    let f_cands: Vec<Vec<MPoint>> = f_leaves.iter().map(|&l| b.points_at(&(a.height(l) + eps))).collect();
    let g_cands: Vec<Vec<MPoint>> = g_leaves.iter().map(|&l| a.points_at(&(b.height(l) + eps))).collect();
    if f_cands.iter().chain(&g_cands).any(Vec::is_empty) {
        return Ok(false);
    }
    let s = Search { f: a, g: b, eps: eps.clone(), two_eps: eps * qi(2), f_leaves, g_leaves, f_cands, g_cands };
    Ok(s.run())
}

/// The least candidate value at which the trees interleave.
pub fn interleaving_distance(a: &MergeTree, b: &MergeTree, guard: usize) -> Result<Rational> {
    check_guard(a, b, guard)?;
    for eps in candidate_set(a, b) {
        if is_interleaved(a, b, &eps, guard)? {
            return Ok(eps);
        }
    }
    Err(GraphError::InvalidGraph("no candidate interleaves; merge trees are malformed".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaResult {
    pub value: Rational,
    /// Rooting nodes attaining the minimum (first in row-major order).
    pub t: usize,
    pub s: usize,
}

/// `Δ(T, S)`: the minimum over node rootings of the interleaving distance.
pub fn delta(t: &MetricGraph, s: &MetricGraph, guard: usize) -> Result<DeltaResult> {
    let mt: Vec<MergeTree> = (0..t.n()).map(|x| merge_tree(t, x)).collect::<Result<_>>()?;
    let ms: Vec<MergeTree> = (0..s.n()).map(|y| merge_tree(s, y)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..t.n()).flat_map(|i| (0..s.n()).map(move |j| (i, j))).collect();
    let vals: Vec<Rational> =
        pairs.par_iter().map(|&(i, j)| interleaving_distance(&mt[i], &ms[j], guard)).collect::<Result<_>>()?;
    let k = (0..vals.len()).min_by(|&a, &b| vals[a].cmp(&vals[b]).then(a.cmp(&b))).unwrap();
    Ok(DeltaResult { value: vals[k].clone(), t: pairs[k].0, s: pairs[k].1 })
}

/// Ingredients of the locality threshold, read off a node multiset alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSets {
    /// Radii where some node's volume slope jumps, over all nodes.
    pub radii: BTreeSet<Rational>,
    /// One entry per leaf.
    pub leaf_lengths: Vec<Rational>,
    /// Sums `Σ λ_j r_j + Σ μ_k ℓ_k` with `λ, μ ∈ {0, 1}`.
    pub sums: BTreeSet<Rational>,
}

impl SigmaSets {
    /// Smallest positive element of `{½|A − A'|} ∪ {|A − B|}` over the sums:
    /// half the smallest gap between distinct sums.
    pub fn min_positive(&self) -> Option<Rational> {
        let v: Vec<&Rational> = self.sums.iter().collect();
        v.windows(2).map(|w| w[1] - w[0]).min().map(|gap| gap / qi(2))
    }

    /// `ε_T = min(Σ₁ ∪ Σ₂ \ {0}) / 14`.
    pub fn epsilon(&self) -> Option<Rational> {
        self.min_positive().map(|m| m / qi(14))
    }
}

pub fn sigma_sets(ms: &NodeMultiset) -> Result<SigmaSets> {
    let one = qi(1);
    let mut radii = BTreeSet::new();
    let mut leaf_lengths = Vec::new();
    for (i, f) in ms.functions().iter().enumerate() {
        radii.extend(f.breakpoints().iter().skip(1).cloned());
        if ms.degree(i) == 1 {
            let g = ms.length_function(i);
            leaf_lengths.push(g.first_slope_change(&one).expect("a leaf function bends"));
        }
    }
    let mut sums = BTreeSet::from([qi(0)]);
    for x in radii.iter().chain(&leaf_lengths) {
        let shifted: Vec<Rational> = sums.iter().map(|s| s + x).collect();
        sums.extend(shifted);
        if sums.len() > SUM_SET_LIMIT {
            return Err(GraphError::SizeLimitExceeded(format!("more than {SUM_SET_LIMIT} subset sums")));
        }
    }
    Ok(SigmaSets { radii, leaf_lengths, sums })
}
