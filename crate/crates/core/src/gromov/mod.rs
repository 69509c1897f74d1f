//! Gromov-Monge distances: exact enumeration, swap local search, and the
//! structural checks built on them.

mod partition;
mod splitting;
mod suite;

pub use partition::{cross_distributions, partition_equality_check, BlockPairing, Partition};
pub use splitting::{gw_objective, mass_splitting_from_coupling, MassSplitting};
pub use suite::{quasi_metric_suite, QuasiMetricReport, SuiteOptions};

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariants::{lower_bound_local_monge, MapClass};
use crate::scalar::{Extended, PExponent, PValue, Scalar};
use crate::space::{map_cost_unchecked, FiniteMMSpace, MeasurePreservingMap};
use crate::transport::{solve_assignment, CostMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Heuristic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Heuristic => "heuristic",
        }
    }
}

/// A Gromov-Monge value with its optimizing map.
#[derive(Clone, Debug, PartialEq)]
pub struct GMResult<S> {
    pub value: Extended<PValue<S>>,
    pub witness: Option<MeasurePreservingMap>,
    pub method: Method,
}

impl<S: Scalar> GMResult<S> {
    fn infinite(method: Method) -> Self {
        GMResult { value: Extended::Infinite, witness: None, method }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "value": self.value.value_json(),
            "method": self.method.name(),
        });
        if let Extended::Finite(pv) = &self.value {
            v["p"] = Value::String(pv.p.to_string());
            v["pth_power"] = pv.power.to_json();
        }
        v["witness"] = match &self.witness {
            Some(w) => json!(w.assignment()),
            None => Value::Null,
        };
        v
    }
}

/// Size limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug)]
pub struct SizeGuard {
    pub uniform: usize,
    pub general: usize,
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard { uniform: 8, general: 12 }
    }
}

fn uniform_pair<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>) -> bool {
    x.is_uniform() && y.is_uniform()
}

/// d_GM,p by exhaustive enumeration with the default size guard.
pub fn gm_exact<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, p: PExponent) -> Result<GMResult<S>> {
    gm_exact_with_guard(x, y, p, SizeGuard::default())
}

/// Lexicographic depth-first enumeration of measure-preserving maps with
/// fiber-capacity pruning and cost bounding. The first optimum met is kept.
pub fn gm_exact_with_guard<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    p: PExponent,
    guard: SizeGuard,
) -> Result<GMResult<S>> {
    let (nx, ny) = (x.n(), y.n());
    if nx < ny {
        return Ok(GMResult::infinite(Method::Exact));
    }
    let uniform = uniform_pair(x, y);
    if uniform && nx % ny != 0 {
        return Ok(GMResult::infinite(Method::Exact));
    }
    let limit = if uniform { guard.uniform } else { guard.general };
    if nx > limit {
        return Err(Error::SizeLimitExceeded(format!(
            "exact Gromov-Monge enumeration with {nx} source points exceeds the guard {limit}"
        )));
    }
    let mut e = Enumerator::new(x, y, p);
    e.search(0, S::zero());
    Ok(match e.best {
        Some((power, a)) => GMResult {
            value: Extended::Finite(PValue::new(p, power)),
            witness: Some(MeasurePreservingMap::new_unchecked(a)),
            method: Method::Exact,
        },
        None => GMResult::infinite(Method::Exact),
    })
}

struct Enumerator<'a, S> {
    x: &'a FiniteMMSpace<S>,
    ny: usize,
    p: PExponent,
    /// g[((i*nx + j)*ny + a)*ny + b] = w_i w_j Γ(i,a,j,b)^p (Γ itself for p = ∞)
    g: Vec<S>,
    cap: Vec<S>,
    current: Vec<usize>,
    best: Option<(S, Vec<usize>)>,
}

impl<'a, S: Scalar> Enumerator<'a, S> {
    fn new(x: &'a FiniteMMSpace<S>, y: &'a FiniteMMSpace<S>, p: PExponent) -> Self {
        let (nx, ny) = (x.n(), y.n());
        let mut g = Vec::with_capacity(nx * nx * ny * ny);
        for i in 0..nx {
            for j in 0..nx {
                for a in 0..ny {
                    for b in 0..ny {
                        let gam = (x.d(i, j).clone() - y.d(a, b).clone()).abs_val();
                        g.push(match p {
                            PExponent::Finite(pp) => {
                                if gam.is_zero() {
                                    gam
                                } else {
                                    x.w(i).clone() * x.w(j).clone() * gam.powu(pp)
                                }
                            }
                            PExponent::Infinity => gam,
                        });
                    }
                }
            }
        }
        Enumerator { x, ny, p, g, cap: y.weights().to_vec(), current: Vec::with_capacity(nx), best: None }
    }

    fn gval(&self, i: usize, j: usize, a: usize, b: usize) -> &S {
        let nx = self.x.n();
        &self.g[((i * nx + j) * self.ny + a) * self.ny + b]
    }

    fn search(&mut self, k: usize, partial: S) {
        if let Some((b, _)) = &self.best {
            if partial.cmp_total(b) != Ordering::Less {
                return;
            }
        }
        let nx = self.x.n();
        let tol = self.x.tol();
        let zero = S::zero();
        if k == nx {
            if self.cap.iter().all(|c| c.eq_tol(&zero, tol * nx as f64)) {
                self.best = Some((partial, self.current.clone()));
            }
            return;
        }
        for t in 0..self.ny {
            let rest = self.cap[t].clone() - self.x.w(k).clone();
            if !zero.le_tol(&rest, tol * nx as f64) {
                continue;
            }
            let mut next = partial.clone();
            for (j, &b) in self.current.iter().enumerate() {
                let v = self.gval(k, j, t, b);
                match self.p {
                    PExponent::Finite(_) => {
                        if !v.is_zero() {
                            next = next + v.clone() + v.clone();
                        }
                    }
                    PExponent::Infinity => next = S::max_of(next, v.clone()),
                }
            }
            let saved = std::mem::replace(&mut self.cap[t], rest);
            self.current.push(t);
            self.search(k + 1, next);
            self.current.pop();
            self.cap[t] = saved;
        }
    }
}

/// Default number of restarts for [`gm_heuristic`].
pub const DEFAULT_RESTARTS: usize = 32;

/// Pairwise-swap local search from several starting maps. The first start is
/// the optimal local-distribution assignment (when computable); the others are
/// seeded random feasible maps. Swaps exchange the targets of two equal-weight
/// points, which keeps every fiber sum fixed.
pub fn gm_heuristic<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    p: PExponent,
    seed: u64,
    restarts: usize,
) -> Result<GMResult<S>> {
    let (nx, ny) = (x.n(), y.n());
    if nx < ny {
        return Ok(GMResult::infinite(Method::Heuristic));
    }
    let uniform = uniform_pair(x, y);
    if uniform && nx % ny != 0 {
        return Ok(GMResult::infinite(Method::Heuristic));
    }
    let mut starts: Vec<Vec<usize>> = Vec::new();
    if let Ok(Extended::Finite(a)) = lower_bound_local_monge(x, y, MapClass::All) {
        starts.push(a.map.assignment().to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<usize> = if uniform {
        (0..nx).map(|i| i / (nx / ny)).collect()
    } else {
        let zero = CostMatrix::new(vec![vec![S::zero(); ny]; nx])?;
        match solve_assignment(&zero, x.weights(), y.weights(), x.tol(), SizeGuardLimits::GENERAL)? {
            Extended::Finite(a) => a.map.assignment().to_vec(),
            Extended::Infinite => return Ok(GMResult::infinite(Method::Heuristic)),
        }
    };
    // equal-weight classes: shuffling targets within a class keeps fibers intact
    let classes = weight_classes(x);
    while starts.len() < restarts.max(1) {
        let mut a = base.clone();
        for class in &classes {
            let mut targets: Vec<usize> = class.iter().map(|&i| a[i]).collect();
            targets.shuffle(&mut rng);
            for (&i, t) in class.iter().zip(targets) {
                a[i] = t;
            }
        }
        starts.push(a);
    }
    let dx: Vec<f64> = (0..nx * nx).map(|k| x.d(k / nx, k % nx).to_f64()).collect();
    let dy: Vec<f64> = (0..ny * ny).map(|k| y.d(k / ny, k % ny).to_f64()).collect();
    let wf: Vec<f64> = x.weights().iter().map(|w| w.to_f64()).collect();
    let mut best: Option<(PValue<S>, Vec<usize>)> = None;
    for start in starts {
        let a = local_search(&dx, &dy, &wf, nx, ny, p, &classes, start);
        let cost = map_cost_unchecked(x, y, &a, p);
        let better = match &best {
            None => true,
            Some((b, ba)) => match cost.cmp_same(b) {
                Ordering::Less => true,
                Ordering::Equal => a < *ba,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((cost, a));
        }
    }
    let (value, a) = best.expect("at least one start");
    Ok(GMResult {
        value: Extended::Finite(value),
        witness: Some(MeasurePreservingMap::new_unchecked(a)),
        method: Method::Heuristic,
    })
}

struct SizeGuardLimits;

impl SizeGuardLimits {
    const GENERAL: usize = 12;
}

fn weight_classes<S: Scalar>(x: &FiniteMMSpace<S>) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..x.n() {
        match classes.iter_mut().find(|c| x.w(c[0]).eq_tol(x.w(i), x.tol())) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

fn gpow(g: f64, p: PExponent) -> f64 {
    match p {
        PExponent::Finite(1) => g,
        PExponent::Finite(pp) => g.powi(pp as i32),
        PExponent::Infinity => g,
    }
}

fn float_cost(dx: &[f64], dy: &[f64], w: &[f64], nx: usize, ny: usize, p: PExponent, a: &[usize]) -> f64 {
    let mut acc = 0.0;
    for i in 0..nx {
        for j in 0..nx {
            let g = (dx[i * nx + j] - dy[a[i] * ny + a[j]]).abs();
            match p {
                PExponent::Infinity => acc = f64::max(acc, g),
                _ => acc += w[i] * w[j] * gpow(g, p),
            }
        }
    }
    acc
}

/// Best-improvement swap descent guided by float arithmetic; exactness of the
/// reported value comes from re-evaluating the final map in the space's field.
#[allow(clippy::too_many_arguments)]
fn local_search(
    dx: &[f64],
    dy: &[f64],
    w: &[f64],
    nx: usize,
    ny: usize,
    p: PExponent,
    classes: &[Vec<usize>],
    mut a: Vec<usize>,
) -> Vec<usize> {
    let mut current = float_cost(dx, dy, w, nx, ny, p, &a);
    loop {
        let scale = current.abs().max(1e-300);
        let mut best_move: Option<(f64, usize, usize)> = None;
        for class in classes {
            for (ci, &u) in class.iter().enumerate() {
                for &v in &class[ci + 1..] {
                    if a[u] == a[v] {
                        continue;
                    }
                    let delta = match p {
                        PExponent::Infinity => {
                            a.swap(u, v);
                            let c = float_cost(dx, dy, w, nx, ny, p, &a);
                            a.swap(u, v);
                            c - current
                        }
                        _ => {
                            let (tu, tv) = (a[u], a[v]);
                            let mut d = 0.0;
                            for b in 0..nx {
                                if b == u || b == v {
                                    continue;
                                }
                                let tb = a[b];
                                let old = w[u] * gpow((dx[u * nx + b] - dy[tu * ny + tb]).abs(), p)
                                    + w[v] * gpow((dx[v * nx + b] - dy[tv * ny + tb]).abs(), p);
                                let new = w[u] * gpow((dx[u * nx + b] - dy[tv * ny + tb]).abs(), p)
                                    + w[v] * gpow((dx[v * nx + b] - dy[tu * ny + tb]).abs(), p);
                                d += 2.0 * w[b] * (new - old);
                            }
                            d
                        }
                    };
                    if delta < -1e-12 * scale && best_move.is_none_or(|(bd, _, _)| delta < bd) {
                        best_move = Some((delta, u, v));
                    }
                }
            }
        }
        match best_move {
            Some((d, u, v)) => {
                a.swap(u, v);
                current += d;
                if matches!(p, PExponent::Infinity) {
                    current = float_cost(dx, dy, w, nx, ny, p, &a);
                }
            }
            None => return a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Rational};
    use crate::space::{is_isomorphism, map_cost};

    fn delta(n: usize) -> FiniteMMSpace<Rational> {
        let d = (0..n).map(|i| (0..n).map(|j| if i == j { qi(0) } else { qi(1) }).collect()).collect();
        FiniteMMSpace::uniform(d).unwrap()
    }

    #[test]
    fn two_points_onto_one_and_back() {
        let (x, y) = (delta(2), delta(1));
        for p in [1, 2, 3] {
            let r = gm_exact(&x, &y, PExponent::Finite(p)).unwrap();
            assert_eq!(r.value.finite().unwrap().power, q(1, 2));
            assert!(gm_exact(&y, &x, PExponent::Finite(p)).unwrap().value.is_infinite());
        }
    }

    #[test]
    fn identity_for_equal_spaces() {
        let d = vec![vec![qi(0), qi(1), qi(2)], vec![qi(1), qi(0), qi(2)], vec![qi(2), qi(2), qi(0)]];
        let x = FiniteMMSpace::uniform(d).unwrap();
        let r = gm_exact(&x, &x, PExponent::Finite(1)).unwrap();
        assert!(r.value.finite().unwrap().is_zero());
        assert!(is_isomorphism(&x, &x, r.witness.as_ref().unwrap()));
    }

    #[test]
    fn witness_reproduces_value() {
        let d = vec![
            vec![qi(0), qi(3), qi(4), qi(5)],
            vec![qi(3), qi(0), qi(5), qi(4)],
            vec![qi(4), qi(5), qi(0), qi(3)],
            vec![qi(5), qi(4), qi(3), qi(0)],
        ];
        let x = FiniteMMSpace::uniform(d).unwrap();
        let y = delta(2);
        let r = gm_exact(&x, &y, PExponent::Finite(2)).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(map_cost(&x, &y, &w, PExponent::Finite(2)).unwrap(), r.value.into_finite().unwrap());
    }

    #[test]
    fn heuristic_on_all_equal_maps() {
        let r = gm_heuristic(&delta(4), &delta(2), PExponent::Finite(1), 3, 4).unwrap();
        assert_eq!(r.value.finite().unwrap().power, q(1, 4));
        assert_eq!(r.method, Method::Heuristic);
    }

    #[test]
    fn guard_rejects_large_uniform_inputs() {
        let r = gm_exact(&delta(9), &delta(3), PExponent::Finite(1));
        assert!(matches!(r, Err(Error::SizeLimitExceeded(_))));
    }

    #[test]
    fn json_shape() {
        let r = gm_exact(&delta(2), &delta(1), PExponent::Finite(1)).unwrap();
        let v = r.to_json();
        assert_eq!(v["value"], "1/2");
        assert_eq!(v["witness"], json!([0, 0]));
        assert_eq!(v["method"], "exact");
        let inf = gm_exact(&delta(1), &delta(2), PExponent::Finite(1)).unwrap().to_json();
        assert_eq!(inf["value"], "inf");
    }
}
