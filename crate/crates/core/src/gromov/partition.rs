use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::FiniteMMSpace;
use crate::transport::Atoms;

/// A partition of the points into blocks `0..blocks`, given by a label per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Every label in `0..max+1` must be used.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        let used: BTreeSet<usize> = labels.iter().copied().collect();
        if used.len() != blocks {
            return Err(Error::MalformedPartition(format!("labels skip a block among 0..{blocks}")));
        }
        Ok(Partition { labels, blocks })
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, members) in blocks.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::MalformedPartition(format!("block {b} is empty")));
            }
            for &i in members {
                if i >= n {
                    return Err(Error::MalformedPartition(format!("point {i} out of range 0..{n}")));
                }
                if labels[i] != usize::MAX {
                    return Err(Error::MalformedPartition(format!("point {i} lies in two blocks")));
                }
                labels[i] = b;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::MalformedPartition(format!("point {i} is not covered")));
        }
        Ok(Partition { labels, blocks: blocks.len() })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn members(&self, b: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == b).collect()
    }
}

/// Pairs of blocks (i, j) in X matched with pairs (k, l) in Y.
///
/// The list may cover every ordered pair, or only pairs with i ≤ j, in which
/// case (j, i) ↔ (l, k) is implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPairing {
    pub pairs: Vec<(usize, usize, usize, usize)>,
}

impl BlockPairing {
    pub fn identity(blocks: usize) -> Self {
        let pairs = (0..blocks).flat_map(|i| (0..blocks).map(move |j| (i, j, i, j))).collect();
        BlockPairing { pairs }
    }

    /// Expands to the full ordered table and checks it is a bijection.
    pub fn ordered(&self, bx: usize, by: usize) -> Result<Vec<(usize, usize, usize, usize)>> {
        let mut full: BTreeSet<(usize, usize, usize, usize)> = BTreeSet::new();
        for &(i, j, k, l) in &self.pairs {
            if i >= bx || j >= bx || k >= by || l >= by {
                return Err(Error::MalformedPartition(format!("pairing entry ({i},{j})<->({k},{l}) out of range")));
            }
            full.insert((i, j, k, l));
        }
        let upper_only = self.pairs.iter().all(|&(i, j, _, _)| i <= j);
        if upper_only {
            for &(i, j, k, l) in &self.pairs {
                full.insert((j, i, l, k));
            }
        }
        let sources: BTreeSet<(usize, usize)> = full.iter().map(|&(i, j, _, _)| (i, j)).collect();
        let targets: BTreeSet<(usize, usize)> = full.iter().map(|&(_, _, k, l)| (k, l)).collect();
        if bx != by || sources.len() != full.len() || targets.len() != full.len() || full.len() != bx * bx {
            return Err(Error::MalformedPartition(format!(
                "pairing is not a bijection of block pairs ({} entries for {bx}x{bx} and {by}x{by} blocks)",
                full.len()
            )));
        }
        Ok(full.into_iter().collect())
    }
}

/// The cross-distance measure of blocks (i, j): atoms d(x, x') with mass w_x w_{x'}
/// for x in block i, x' in block j. Not normalized.
pub fn cross_distributions<S: Scalar>(x: &FiniteMMSpace<S>, part: &Partition, i: usize, j: usize) -> Atoms<S> {
    let mi = part.members(i);
    let mj = part.members(j);
    let mut raw = Vec::with_capacity(mi.len() * mj.len());
    for &a in &mi {
        for &b in &mj {
            raw.push((x.d(a, b).clone(), x.w(a).clone() * x.w(b).clone()));
        }
    }
    Atoms::from_unsorted(raw)
}

/// True iff every paired block pair has the same cross-distance measure.
/// Exact for rational spaces; floats compare with the spaces' tolerance.
pub fn partition_equality_check<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    partition_x: &Partition,
    partition_y: &Partition,
    pairing: &BlockPairing,
) -> Result<bool> {
    if partition_x.labels().len() != x.n() || partition_y.labels().len() != y.n() {
        return Err(Error::MalformedPartition("partition length differs from the space size".into()));
    }
    let table = pairing.ordered(partition_x.blocks(), partition_y.blocks())?;
    let tol = x.tol().max(y.tol());
    for (i, j, k, l) in table {
        let hx = cross_distributions(x, partition_x, i, j);
        let hy = cross_distributions(y, partition_y, k, l);
        if !hx.eq_tol(&hy, tol) {
            log::debug!("block pair ({i},{j}) differs from ({k},{l})");
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::global_distribution;
    use crate::scalar::qi;

    fn path4() -> FiniteMMSpace<crate::scalar::Rational> {
        let d = (0..4).map(|i: i64| (0..4).map(|j: i64| qi((i - j).abs())).collect()).collect();
        FiniteMMSpace::uniform(d).unwrap()
    }

    #[test]
    fn identity_pairing_passes() {
        let x = path4();
        let p = Partition::new(vec![0, 0, 1, 1]).unwrap();
        assert!(partition_equality_check(&x, &x, &p, &p, &BlockPairing::identity(2)).unwrap());
    }

    #[test]
    fn reflected_blocks_pass_and_imply_equal_global() {
        let x = path4();
        let y = x.permuted(&[3, 2, 1, 0]);
        let px = Partition::new(vec![0, 0, 1, 1]).unwrap();
        let py = Partition::new(vec![1, 1, 0, 0]).unwrap();
        let pairing = BlockPairing { pairs: vec![(0, 0, 0, 0), (0, 1, 0, 1), (1, 1, 1, 1)] };
        assert!(partition_equality_check(&x, &y, &px, &py, &pairing).unwrap());
        assert_eq!(global_distribution(&x), global_distribution(&y));
    }

    #[test]
    fn wrong_pairing_fails() {
        let x = path4();
        let p = Partition::new(vec![0, 1, 1, 1]).unwrap();
        let pairing = BlockPairing { pairs: vec![(0, 0, 1, 1), (0, 1, 0, 1), (1, 1, 0, 0)] };
        assert!(!partition_equality_check(&x, &x, &p, &p, &pairing).unwrap());
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(Partition::new(vec![0, 2]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        let x = path4();
        let p = Partition::new(vec![0, 0, 1, 1]).unwrap();
        let bad = BlockPairing { pairs: vec![(0, 0, 0, 0), (0, 1, 0, 0), (1, 1, 1, 1)] };
        assert!(matches!(
            partition_equality_check(&x, &x, &p, &p, &bad),
            Err(Error::MalformedPartition(_))
        ));
    }
}
