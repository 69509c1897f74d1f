//! Sampled spaces: a finite mm-space together with the points it came from.

use std::collections::HashMap;

use gromon_core::scalar::{q, qi, Rational, Scalar};
use gromon_core::{FiniteMMSpace, SpaceOptions};

use crate::error::{Result, ShapeError};
use crate::surd::ExactField;

/// Dense distance matrices beyond this many points are refused.
pub const MAX_DENSE_POINTS: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub descriptor: String,
    pub count: usize,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledSpace<S: Scalar> {
    pub space: FiniteMMSpace<S>,
    /// Sample coordinates, one vector per point, in the order of the space.
    pub points: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_POINTS {
        return Err(ShapeError::SizeLimitExceeded(format!("{n} points exceed the dense limit {MAX_DENSE_POINTS}")));
    }
    Ok(())
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Uniform-weight space of Euclidean distances. The matrix is filled from the
/// upper triangle so it is exactly symmetric; the triangle inequality holds by
/// construction and is not rechecked.
pub fn euclidean_space(points: &[Vec<f64>]) -> Result<FiniteMMSpace<f64>> {
    let n = points.len();
    check_size(n)?;
    let mut flat = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(&points[i], &points[j]);
            flat[i * n + j] = d;
            flat[j * n + i] = d;
        }
    }
    let w = vec![1.0 / n as f64; n];
    Ok(FiniteMMSpace::from_flat(n, flat, w, SpaceOptions { check_triangle: false, ..SpaceOptions::default() })?)
}

pub fn sampled(points: Vec<Vec<f64>>, descriptor: String, rule: &str) -> Result<SampledSpace<f64>> {
    let space = euclidean_space(&points)?;
    let count = points.len();
    Ok(SampledSpace { space, points, provenance: Provenance { descriptor, count, rule: rule.to_string() } })
}

fn sq_dist<F: ExactField>(a: &[F], b: &[F]) -> F {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        let t = x.sub(y);
        acc = acc.add(&t.mul(&t));
    }
    acc
}

/// Replaces exact squared distances by their rank in one table shared by all
/// the given point sets, giving rational uniform spaces.
///
/// Equality of distance measures, and the order of their atoms, are unchanged
/// by a strictly increasing relabelling of the values, so cross-distance and
/// global distribution comparisons on these spaces are exact comparisons of
/// the Euclidean ones. The ranks need not satisfy the triangle inequality,
/// which is therefore not checked.
pub fn ordinal_spaces<F: ExactField>(sets: &[&[Vec<F>]]) -> Result<Vec<FiniteMMSpace<Rational>>> {
    let mut sq: Vec<Vec<F>> = Vec::with_capacity(sets.len());
    let mut distinct: HashMap<F, usize> = HashMap::new();
    for s in sets {
        check_size(s.len())?;
        let n = s.len();
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let d = sq_dist(&s[i], &s[j]);
                distinct.entry(d.clone()).or_default();
                flat.push(d);
            }
        }
        sq.push(flat);
    }
    let mut sorted: Vec<F> = distinct.keys().cloned().collect();
    sorted.sort();
    for (r, v) in sorted.into_iter().enumerate() {
        distinct.insert(v, r);
    }
    sets.iter()
        .zip(sq)
        .map(|(s, flat)| {
            let n = s.len();
            let ranks: Vec<Rational> = flat.iter().map(|d| qi(distinct[d] as i64)).collect();
            let w = vec![q(1, n as i64); n];
            Ok(FiniteMMSpace::from_flat(n, ranks, w, SpaceOptions { check_triangle: false, ..SpaceOptions::default() })?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gromon_core::invariants::global_distribution;

    #[test]
    fn ordinal_encoding_preserves_order() {
        let a: Vec<Vec<Rational>> = vec![vec![qi(0)], vec![qi(1)], vec![qi(3)]];
        let b: Vec<Vec<Rational>> = vec![vec![qi(0)], vec![qi(2)], vec![qi(3)]];
        let sp = ordinal_spaces(&[&a, &b]).unwrap();
        // squared distances 0,1,4,9 in a and 0,1,4,9 in b share ranks
        assert_eq!(global_distribution(&sp[0]), global_distribution(&sp[1]));
        assert_eq!(sp[0].d(0, 2), &qi(3));
        assert_eq!(sp[1].d(0, 1), &qi(2));
    }

    #[test]
    fn euclidean_matrix_is_symmetric() {
        let pts = vec![vec![0.0, 0.0], vec![0.1, 0.7], vec![1.0, 0.3]];
        let x = euclidean_space(&pts).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(x.d(i, j).to_bits(), x.d(j, i).to_bits());
            }
        }
        assert!(euclidean_space(&vec![vec![0.0]; MAX_DENSE_POINTS + 1]).is_err());
    }
}
