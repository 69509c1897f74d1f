//! Rebuilding a metric tree from its node multiset.
//!
//! Works with unnormalized ball lengths `g(x, r) = L·h(x, r)`. The tree is
//! grown from the leaves as a forest `F`; each component has exactly one node
//! still missing edges (its root) until the forest is the whole tree. A root
//! `v` missing one edge `e = vw` sees its own component `C` as everything on
//! its side of `e`, so with `ℓ = |e|`
//!
//! ```text
//! g_T(v, r) = g_C(v, r) + min(r, ℓ) + g_W(w, r − ℓ)
//! g_T(w, r) = g_T(v, r + ℓ) − g_C(v, r + ℓ) − ℓ + min(r, ℓ) + g_C(v, r − ℓ)
//! ```
//!
//! where `W` is the far side. `ℓ` is where the slope of `g_T(v) − g_C(v)`
//! leaves 1, and the second line names `w` inside the multiset.

use std::collections::HashMap;

use gromon_core::scalar::{qi, Rational};

use crate::error::{GraphError, Result};
use crate::graph::MetricGraph;
use crate::pwl::{Pwl, PwlCDF};
use crate::volume::{node_multiset, NodeMultiset};

/// A tree whose node `i` realizes `ms.functions()[i]`.
pub fn reconstruct_tree(ms: &NodeMultiset) -> Result<MetricGraph> {
    // a single edge has two equal end functions; it is the only tree allowed
    // through despite the tie
    if ms.len() == 2 {
        let t = MetricGraph::path(ms.total_length().clone())?;
        if node_multiset(&t) != *ms {
            return Err(GraphError::InconsistentMultiset("two nodes but not a single edge".into()));
        }
        return Ok(t);
    }
    if !ms.pairwise_distinct() {
        return Err(GraphError::DistinctnessViolated);
    }
    let inconsistent = |m: &str| GraphError::InconsistentMultiset(m.to_string());
    let n = ms.len();
    let total = ms.total_length().clone();
    let g: Vec<Pwl> = (0..n).map(|i| ms.length_function(i)).collect();
    let deg: Vec<usize> = (0..n).map(|i| ms.degree(i)).collect();
    if deg.contains(&2) {
        return Err(inconsistent("a node function has initial slope 2/L"));
    }
    let index: HashMap<&PwlCDF, usize> = ms.functions().iter().enumerate().map(|(i, f)| (f, i)).collect();

    let mut in_forest = vec![false; n];
    let mut fdeg = vec![0usize; n];
    let mut comp: Vec<Pwl> = vec![Pwl::zero(); n];
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for v in 0..n {
        if deg[v] == 1 {
            in_forest[v] = true;
        }
    }
    if !in_forest.iter().any(|&b| b) {
        return Err(inconsistent("no leaves"));
    }
    let one = qi(1);
    for _round in 0..n {
        if edges.len() + 1 == n {
            break;
        }
        let roots: Vec<usize> = (0..n).filter(|&v| in_forest[v] && deg[v] == fdeg[v] + 1).collect();
        if roots.is_empty() {
            return Err(inconsistent("no forest root is missing exactly one edge"));
        }
        let mut attach: Vec<(usize, usize, Rational)> = Vec::with_capacity(roots.len());
        for &v in &roots {
            let diff = g[v].sub(&comp[v]);
            if diff.initial_slope() != one {
                return Err(inconsistent("missing edge does not start with slope 1"));
            }
            let l = diff.first_slope_change(&one).ok_or_else(|| inconsistent("edge length not found"))?;
            let cand = diff
                .advance(&l)
                .sub(&Pwl::from_points(vec![qi(0)], vec![l.clone()]))
                .add(&Pwl::ramp(&l))
                .add(&comp[v].delay(&l));
            let cand = PwlCDF::new(cand.scale(&(qi(1) / &total))).map_err(|_| inconsistent("candidate is not a volume function"))?;
            let w = *index.get(&cand).ok_or_else(|| inconsistent("candidate neighbour is not in the multiset"))?;
            if w == v {
                return Err(inconsistent("candidate neighbour is the node itself"));
            }
            attach.push((v, w, l));
        }
        let mut new_comp: HashMap<usize, Pwl> = HashMap::new();
        for (v, w, l) in &attach {
            // the mutual case v ↔ w closes the tree with a single edge
            let dup = edges.iter().any(|(a, b, _)| (a, b) == (w, v));
            if dup {
                continue;
            }
            edges.push((*v, *w, l.clone()));
            fdeg[*v] += 1;
            fdeg[*w] += 1;
            let base = new_comp.remove(w).unwrap_or_else(|| if in_forest[*w] { comp[*w].clone() } else { Pwl::zero() });
            new_comp.insert(*w, base.add(&Pwl::ramp(l)).add(&comp[*v].delay(l)));
        }
        for (w, f) in new_comp {
            in_forest[w] = true;
            comp[w] = f;
        }
        if fdeg.iter().zip(&deg).any(|(f, d)| f > d) {
            return Err(inconsistent("a node received more edges than its degree"));
        }
    }
    if edges.len() + 1 != n {
        return Err(inconsistent("growth stopped before spanning all nodes"));
    }
    let t = MetricGraph::new(n, edges).map_err(|e| inconsistent(&e.to_string()))?;
    if !t.is_tree() || node_multiset(&t) != *ms {
        return Err(inconsistent("the grown tree does not reproduce the multiset"));
    }
    Ok(t)
}
