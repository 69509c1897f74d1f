//! Exact volume growth `h_G(x, r) = μ_G(B(x, r))` and node multisets.

use std::collections::BTreeMap;

use gromon_core::scalar::{parse_rational, qi, Rational};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{GraphError, Result};
use crate::graph::{GraphPoint, MetricGraph};
use crate::pwl::{Pwl, PwlCDF};

/// Unnormalized ball length `r ↦ |B(x, r)|`.
///
/// A segment of length `l` whose ends lie at distances `a`, `b` from `x`
/// contributes `min(l, (r − a)⁺ + (r − b)⁺)`: slope +1 from `a`, +1 from `b`,
/// and −2 once the two fronts meet at `(l + a + b) / 2`.
pub fn ball_length_function(g: &MetricGraph, x: &GraphPoint) -> Pwl {
    let d = g.distances_from(x);
    let mut events: Vec<(Rational, i64)> = Vec::with_capacity(3 * g.edges().len() + 3);
    let mut push = |a: &Rational, b: &Rational, l: &Rational| {
        events.push((a.clone(), 1));
        events.push((b.clone(), 1));
        events.push(((l + a + b) / qi(2), -2));
    };
    for (k, e) in g.edges().iter().enumerate() {
        match x {
            GraphPoint::Edge { edge, offset } if *edge == k => {
                let zero = qi(0);
                push(&zero, &d[e.u], offset);
                push(&zero, &d[e.v], &(&e.len - offset));
            }
            _ => push(&d[e.u], &d[e.v], &e.len),
        }
    }
    events.sort();
    let mut xs = vec![qi(0)];
    let mut ys = vec![qi(0)];
    let mut slope = 0i64;
    let mut i = 0;
    // events at r = 0 set the initial slope
    while i < events.len() {
        let r = events[i].0.clone();
        let mut ds = 0;
        while i < events.len() && events[i].0 == r {
            ds += events[i].1;
            i += 1;
        }
        let (lx, ly) = (xs.last().unwrap().clone(), ys.last().unwrap().clone());
        if r > lx {
            xs.push(r.clone());
            ys.push(ly + qi(slope) * (&r - &lx));
        }
        slope += ds;
    }
    debug_assert_eq!(slope, 0);
    Pwl::from_points(xs, ys)
}

/// Normalized volume growth at `x`.
pub fn ball_volume_function(g: &MetricGraph, x: &GraphPoint) -> PwlCDF {
    let f = ball_length_function(g, x).scale(&(qi(1) / g.total_length()));
    PwlCDF::new(f).expect("ball volumes of a connected graph form a CDF")
}

/// The multiset of node volume functions, sorted, with the total length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMultiset {
    total_length: Rational,
    functions: Vec<PwlCDF>,
}

impl NodeMultiset {
    /// Validates that every initial slope times the total length is a degree.
    pub fn new(total_length: Rational, mut functions: Vec<PwlCDF>) -> Result<Self> {
        if total_length <= qi(0) || functions.is_empty() {
            return Err(GraphError::InconsistentMultiset("empty multiset or nonpositive length".into()));
        }
        for f in &functions {
            let deg = f.initial_slope() * &total_length;
            if !deg.is_integer() || deg < qi(1) {
                return Err(GraphError::InconsistentMultiset(format!("initial slope gives degree {deg}")));
            }
        }
        functions.sort();
        Ok(NodeMultiset { total_length, functions })
    }

    pub fn total_length(&self) -> &Rational {
        &self.total_length
    }

    pub fn functions(&self) -> &[PwlCDF] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn degree(&self, i: usize) -> usize {
        (self.functions[i].initial_slope() * &self.total_length).to_integer().to_usize().unwrap()
    }

    /// Unnormalized `r ↦ |B(x_i, r)|`.
    pub fn length_function(&self, i: usize) -> Pwl {
        self.functions[i].pwl().scale(&self.total_length)
    }

    pub fn pairwise_distinct(&self) -> bool {
        self.functions.windows(2).all(|w| w[0] != w[1])
    }

    /// The shortest edge: the first radius where some node function bends.
    pub fn shortest_edge(&self) -> Rational {
        self.functions.iter().map(|f| f.breakpoints()[1].clone()).min().unwrap()
    }

    /// `{"total_length": "p/q", "functions": [{"r": [..], "h": [..]}]}`.
    pub fn to_json(&self) -> Value {
        let strs = |xs: &[Rational]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let fs: Vec<Value> = self.functions.iter().map(|f| json!({"r": strs(f.breakpoints()), "h": strs(f.values())})).collect();
        json!({"total_length": self.total_length.to_string(), "functions": fs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rat = |x: &Value| -> Result<Rational> {
            x.as_str().ok_or_else(|| GraphError::Parse("expected a \"p/q\" string".into())).and_then(|s| Ok(parse_rational(s)?))
        };
        let list = |x: Option<&Value>, key: &str| -> Result<Vec<Rational>> {
            x.and_then(Value::as_array).ok_or_else(|| GraphError::Parse(format!("`{key}` must be an array")))?.iter().map(rat).collect()
        };
        let total = rat(v.get("total_length").ok_or_else(|| GraphError::Parse("missing `total_length`".into()))?)?;
        let fs = v.get("functions").and_then(Value::as_array).ok_or_else(|| GraphError::Parse("`functions` must be an array".into()))?;
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            let (xs, ys) = (list(f.get("r"), "r")?, list(f.get("h"), "h")?);
            if xs.is_empty() || xs.len() != ys.len() || !xs[0].is_zero() || xs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(GraphError::Parse("breakpoints must start at 0, increase and match the values".into()));
            }
            out.push(PwlCDF::new(Pwl::from_points(xs, ys))?);
        }
        NodeMultiset::new(total, out)
    }
}

pub fn node_multiset(g: &MetricGraph) -> NodeMultiset {
    let fs: Vec<PwlCDF> = (0..g.n()).into_par_iter().map(|v| ball_volume_function(g, &GraphPoint::Node(v))).collect();
    NodeMultiset::new(g.total_length().clone(), fs).expect("node functions of a graph are consistent")
}

/// Length of `{s ∈ [s0, s1] : a < φ(s) < b}` for `φ` linear from `p0` to `p1`.
fn preimage_length(s0: &Rational, s1: &Rational, p0: &Rational, p1: &Rational, a: &Rational, b: &Rational) -> Rational {
    let w = s1 - s0;
    if p0 == p1 {
        return if a < p0 && p0 < b { w } else { qi(0) };
    }
    let (lo, hi) = if p0 < p1 { (p0, p1) } else { (p1, p0) };
    let from = lo.max(a);
    let to = hi.min(b);
    if to <= from {
        return qi(0);
    }
    (to - from) * w / (hi - lo)
}

/// Recovers `#N_k` for every degree from the distribution of `|B(x, r)|`
/// over all points `x`, at a radius below half the shortest edge.
///
/// Near a node `v` of degree `k`, a point at distance `s < r` has ball length
/// `|B(v, r − s)| + 2s`; every other point has `2r`. Leaves fill `(r, 2r)` with
/// mass `r` each, and a node of degree `k ≥ 3` puts mass `k·r/(k − 2)` into
/// each `((j − 1)r, jr)` for `3 ≤ j ≤ k`, so the counts unwind from the top.
pub fn node_count_recovery(ms: &NodeMultiset, r: &Rational) -> Result<BTreeMap<usize, usize>> {
    if *r <= qi(0) || qi(2) * r >= ms.shortest_edge() {
        return Err(GraphError::RadiusTooLarge(r.to_string()));
    }
    let max_deg = (0..ms.len()).map(|i| ms.degree(i)).max().unwrap();
    // mass[j] = μ{x : |B(x, r)| ∈ ((j − 1)r, jr)} for j ≥ 3, mass[2] over (0, 2r)
    let mut mass = vec![qi(0); max_deg + 2];
    for i in 0..ms.len() {
        let g = ms.length_function(i);
        let deg = qi(ms.degree(i) as i64);
        let phi = |s: &Rational| g.eval(&(r - s)) + qi(2) * s;
        let mut ss: Vec<Rational> = g.breakpoints().iter().filter(|x| *x < r).map(|x| r - x).collect();
        ss.push(qi(0));
        ss.push(r.clone());
        ss.sort();
        ss.dedup();
        for (j, m) in mass.iter_mut().enumerate().skip(2) {
            let (a, b) = if j == 2 { (qi(0), qi(2) * r) } else { (qi(j as i64 - 1) * r, qi(j as i64) * r) };
            for w in ss.windows(2) {
                *m += &deg * preimage_length(&w[0], &w[1], &phi(&w[0]), &phi(&w[1]), &a, &b);
            }
        }
    }
    let mut counts = BTreeMap::new();
    let leaves = &mass[2] / r;
    let push = |counts: &mut BTreeMap<usize, usize>, k: usize, c: Rational| -> Result<()> {
        if !c.is_integer() || c < qi(0) {
            return Err(GraphError::InconsistentMultiset(format!("degree-{k} count {c} is not a natural number")));
        }
        if !c.is_zero() {
            counts.insert(k, c.to_integer().to_usize().unwrap());
        }
        Ok(())
    };
    push(&mut counts, 1, leaves)?;
    for k in 3..=max_deg {
        let c = (&mass[k] - &mass[k + 1]) * qi(k as i64 - 2) / (qi(k as i64) * r);
        push(&mut counts, k, c)?;
    }
    Ok(counts)
}
