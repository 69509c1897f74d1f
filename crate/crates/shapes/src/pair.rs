//! Two decorated copies of one block layout, sampled block by block.

use gromon_core::gromov::{partition_equality_check, BlockPairing, Partition};
use gromon_core::invariants::global_distribution;

use crate::congruence::{congruent_approx, congruent_exact};
use crate::error::Result;
use crate::sample::{ordinal_spaces, SampledSpace};
use crate::surd::QuadSurd;

#[derive(Clone, Debug)]
pub struct DecoratedPair {
    pub x: SampledSpace<f64>,
    pub y: SampledSpace<f64>,
    /// Exact coordinates when the layout lives in a quadratic field.
    pub exact: Option<(Vec<Vec<QuadSurd>>, Vec<Vec<QuadSurd>>)>,
    /// Block of each sample; the same list serves both spaces.
    pub labels: Vec<usize>,
    pub raised_x: Vec<bool>,
    pub raised_y: Vec<bool>,
    pub pairing: BlockPairing,
}

/// Outcome of the exact comparisons on a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub partition_check: bool,
    pub global_equal: bool,
    pub congruent: bool,
}

impl DecoratedPair {
    pub fn partition(&self) -> Partition {
        Partition::new(self.labels.clone()).expect("labels cover every block")
    }

    /// Partition check, global distributions and congruence. Exact whenever
    /// exact coordinates are present, otherwise within `tol`.
    pub fn report(&self, tol: f64) -> Result<PairReport> {
        let part = self.partition();
        match &self.exact {
            Some((ex, ey)) => {
                let sp = ordinal_spaces(&[ex, ey])?;
                Ok(PairReport {
                    partition_check: partition_equality_check(&sp[0], &sp[1], &part, &part, &self.pairing)?,
                    global_equal: global_distribution(&sp[0]) == global_distribution(&sp[1]),
                    congruent: congruent_exact(ex, ey),
                })
            }
            None => {
                let hx = global_distribution(&self.x.space);
                let hy = global_distribution(&self.y.space);
                Ok(PairReport {
                    partition_check: partition_equality_check(&self.x.space, &self.y.space, &part, &part, &self.pairing)?,
                    global_equal: hx.eq_tol(&hy, tol),
                    congruent: congruent_approx(&self.x.points, &self.y.points, tol),
                })
            }
        }
    }
}
