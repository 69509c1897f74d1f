//! Two six-point subsets of the line with the same distance multiset.

use gromon_core::scalar::{qi, Rational};
use gromon_core::FiniteMMSpace;

use crate::sample::{Provenance, SampledSpace};

pub const BLOOM_X: [i64; 6] = [0, 1, 4, 10, 12, 17];
pub const BLOOM_Y: [i64; 6] = [0, 1, 8, 11, 13, 17];

fn line_space(xs: &[i64], name: &str) -> SampledSpace<Rational> {
    let d = xs.iter().map(|a| xs.iter().map(|b| qi((a - b).abs())).collect()).collect();
    SampledSpace {
        space: FiniteMMSpace::uniform(d).expect("points on a line form a metric"),
        points: xs.iter().map(|&a| vec![a as f64]).collect(),
        provenance: Provenance { descriptor: format!("bloom {name}"), count: xs.len(), rule: "listed".into() },
    }
}

/// The pair X, Y as uniform rational spaces.
pub fn bloom_point_clouds() -> (SampledSpace<Rational>, SampledSpace<Rational>) {
    (line_space(&BLOOM_X, "X"), line_space(&BLOOM_Y, "Y"))
}

pub fn bloom_coordinates() -> (Vec<Rational>, Vec<Rational>) {
    (BLOOM_X.iter().map(|&a| qi(a)).collect(), BLOOM_Y.iter().map(|&a| qi(a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gromon_core::invariants::global_distribution;

    #[test]
    fn equal_distance_multisets_and_diameter() {
        let (x, y) = bloom_point_clouds();
        assert_eq!(global_distribution(&x.space), global_distribution(&y.space));
        assert_eq!(x.space.diameter(), qi(17));
        assert_eq!(y.space.diameter(), qi(17));
    }
}
