//! Canonical strings for metric trees: length-labelled AHU encodings, minimized
//! over the centroid rootings. Two trees get the same string exactly when some
//! bijection of nodes preserves adjacency and edge lengths.

use crate::error::Result;
use crate::graph::MetricGraph;

fn encode(t: &MetricGraph, v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = t
        .incident(v)
        .iter()
        .filter(|&&(_, w)| Some(w) != parent)
        .map(|&(k, w)| format!("{}:{}", t.edge(k).len, encode(t, w, Some(v))))
        .collect();
    kids.sort();
    format!("({})", kids.join(","))
}

fn centroids(t: &MetricGraph) -> Vec<usize> {
    let n = t.n();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(_, w) in t.incident(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev().filter(|&&v| v != 0) {
        size[parent[v]] += size[v];
    }
    let heaviest = |v: usize| {
        let below = t.incident(v).iter().filter(|&&(_, w)| parent[w] == v && w != v).map(|&(_, w)| size[w]).max().unwrap_or(0);
        below.max(n - size[v])
    };
    let best = (0..n).map(heaviest).min().unwrap();
    (0..n).filter(|&v| heaviest(v) == best).collect()
}

pub fn tree_canonical_form(t: &MetricGraph) -> Result<String> {
    t.require_tree()?;
    Ok(centroids(t).into_iter().map(|c| encode(t, c, None)).min().unwrap())
}

pub fn trees_isomorphic(a: &MetricGraph, b: &MetricGraph) -> Result<bool> {
    Ok(tree_canonical_form(a)? == tree_canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gromon_core::scalar::{q, qi};

    #[test]
    fn relabelled_copies_agree() {
        let a = MetricGraph::new(6, vec![(0, 1, qi(1)), (0, 2, qi(2)), (0, 3, q(1, 2)), (3, 4, qi(1)), (3, 5, qi(3))]).unwrap();
        let b = MetricGraph::new(6, vec![(5, 4, qi(1)), (5, 2, qi(3)), (5, 0, q(1, 2)), (0, 1, qi(2)), (0, 3, qi(1))]).unwrap();
        assert_eq!(tree_canonical_form(&a).unwrap(), tree_canonical_form(&b).unwrap());
        let c = MetricGraph::new(6, vec![(0, 1, qi(2)), (0, 2, qi(2)), (0, 3, q(1, 2)), (3, 4, qi(1)), (3, 5, qi(3))]).unwrap();
        assert_ne!(tree_canonical_form(&a).unwrap(), tree_canonical_form(&c).unwrap());
    }

    #[test]
    fn cycles_are_not_trees() {
        assert!(tree_canonical_form(&MetricGraph::circle(qi(1)).unwrap()).is_err());
    }
}
