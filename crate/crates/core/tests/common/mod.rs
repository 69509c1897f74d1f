#![allow(dead_code)]

use gromon_core::scalar::{q, qi, Rational};
use gromon_core::FiniteMMSpace;
use rand::Rng;

/// Distances drawn from {1, 5/4, 3/2, 7/4, 2}: any such matrix is a metric.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![qi(0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = q(4 + rng.random_range(0..5), 4);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    d
}

pub fn random_uniform<R: Rng>(rng: &mut R, n: usize) -> FiniteMMSpace<Rational> {
    FiniteMMSpace::uniform(random_metric(rng, n)).unwrap()
}

/// Random weights with denominators up to 12, summing to 1.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..5)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|r| q(r, total)).collect()
}

pub fn delta(n: usize) -> FiniteMMSpace<Rational> {
    let d = (0..n).map(|i| (0..n).map(|j| if i == j { qi(0) } else { qi(1) }).collect()).collect();
    FiniteMMSpace::uniform(d).unwrap()
}

/// Every map X → Y with exact fiber sums, by direct enumeration of all n_Y^n_X maps.
pub fn all_measure_preserving(x: &FiniteMMSpace<Rational>, y: &FiniteMMSpace<Rational>) -> Vec<Vec<usize>> {
    let (nx, ny) = (x.n(), y.n());
    let mut out = Vec::new();
    let total = ny.pow(nx as u32);
    for code in 0..total {
        let mut a = Vec::with_capacity(nx);
        let mut c = code;
        for _ in 0..nx {
            a.push(c % ny);
            c /= ny;
        }
        let mut fiber = vec![qi(0); ny];
        for (i, &t) in a.iter().enumerate() {
            fiber[t] += x.w(i);
        }
        if fiber.iter().zip(y.weights()).all(|(f, w)| f == w) {
            out.push(a);
        }
    }
    out
}

/// Σ_{i,j} w_i w_j |d_X(i,j) − d_Y(a_i,a_j)|^p.
pub fn brute_cost(x: &FiniteMMSpace<Rational>, y: &FiniteMMSpace<Rational>, a: &[usize], p: u32) -> Rational {
    let mut acc = qi(0);
    for i in 0..x.n() {
        for j in 0..x.n() {
            let g = x.d(i, j) - y.d(a[i], a[j]);
            let g = if g < qi(0) { -g } else { g };
            let mut gp = qi(1);
            for _ in 0..p {
                gp *= &g;
            }
            acc += x.w(i) * x.w(j) * gp;
        }
    }
    acc
}
