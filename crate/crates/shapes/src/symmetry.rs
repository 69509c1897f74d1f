//! Combinatorial symmetry of the block layouts: the faces of a polytope as a
//! graph, its automorphisms, splits that no symmetry swaps, and block
//! pairings matched by graph distance.
//!
//! The layouts used here (the edge cycle of a 2n-gon and the face graph of the
//! dodecahedron) are distance-transitive and their graph automorphisms are
//! exactly the restrictions of the solid's isometries.

use std::collections::{BTreeMap, VecDeque};

use gromon_core::gromov::BlockPairing;

use crate::error::{Result, ShapeError};

pub fn cycle_graph(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| i != j && ((i + 1) % n == j || (j + 1) % n == i)).collect()).collect()
}

pub fn graph_distances(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if adj[u][v] && d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

/// Every automorphism of a small graph, as vertex permutations.
pub fn automorphisms(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let mut out = Vec::new();
    let mut img: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(adj: &[Vec<bool>], deg: &[usize], img: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let k = img.len();
        if k == adj.len() {
            out.push(img.clone());
            return;
        }
        for c in 0..adj.len() {
            if used[c] || deg[c] != deg[k] || !(0..k).all(|j| adj[k][j] == adj[c][img[j]]) {
                continue;
            }
            used[c] = true;
            img.push(c);
            rec(adj, deg, img, used, out);
            img.pop();
            used[c] = false;
        }
    }
    rec(adj, &deg, &mut img, &mut used, &mut out);
    out
}

/// The first half-split, in increasing bitmask order, that no automorphism
/// carries onto its complement.
pub fn find_rigid_split(adj: &[Vec<bool>]) -> Result<Vec<bool>> {
    let n = adj.len();
    if n % 2 != 0 || n >= 64 {
        return Err(ShapeError::InvalidParameters(format!("cannot halve {n} blocks")));
    }
    let autos = automorphisms(adj);
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != n / 2 {
            continue;
        }
        let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let swapped = autos.iter().any(|g| (0..n).all(|i| a[g[i]] != a[i]));
        if !swapped {
            return Ok(a);
        }
    }
    Err(ShapeError::NoConstruction(format!("every half-split of {n} blocks is swapped by a symmetry")))
}

/// True if some automorphism maps the marked set `a` onto the marked set `b`.
pub fn sets_equivalent(adj: &[Vec<bool>], a: &[bool], b: &[bool]) -> bool {
    automorphisms(adj).iter().any(|g| (0..a.len()).all(|i| a[i] == b[g[i]]))
}

/// Pairs block pairs of two decorated copies of the same layout: (i, j) is
/// matched with some (k, l) at the same graph distance whose decorations agree
/// in order. On a distance-transitive layout a symmetry takes each such (i, j)
/// to its partner.
pub fn class_pairing(adj: &[Vec<bool>], raised_x: &[bool], raised_y: &[bool]) -> Result<BlockPairing> {
    let n = adj.len();
    let dist = graph_distances(adj);
    let classes = |raised: &[bool]| {
        let mut m: BTreeMap<(usize, bool, bool), Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                m.entry((dist[i][j], raised[i], raised[j])).or_default().push((i, j));
            }
        }
        m
    };
    let (cx, cy) = (classes(raised_x), classes(raised_y));
    let mut pairs = Vec::with_capacity(n * n);
    for (key, xs) in &cx {
        let ys = cy.get(key).map(Vec::as_slice).unwrap_or(&[]);
        if ys.len() != xs.len() {
            return Err(ShapeError::NoConstruction(format!("block pair class {key:?} has {} pairs against {}", xs.len(), ys.len())));
        }
        pairs.extend(xs.iter().zip(ys).map(|(&(i, j), &(k, l))| (i, j, k, l)));
    }
    Ok(BlockPairing { pairs })
}
