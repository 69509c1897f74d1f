use std::cmp::Ordering;

use super::{gm_exact_with_guard, GMResult, SizeGuard};
use crate::error::Result;
use crate::invariants::{lower_bound_global, lower_bound_local_kantorovich, lower_bound_local_monge, MapClass};
use crate::scalar::{Extended, PExponent, PValue, Scalar};
use crate::space::{is_isomorphism, FiniteMMSpace};

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Also check L_h^U ≤ L_h ≤ d_GM,1 and L_H ≤ d_GM,1 (p = 1 only).
    pub sandwich: bool,
    pub guard: SizeGuard,
    /// Relative tolerance for triangle checks that need real roots (p ∉ {1, 2, ∞}).
    pub root_tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { sandwich: true, guard: SizeGuard::default(), root_tol: 1e-9 }
    }
}

/// Outcome of the quasi-metric checks over all ordered pairs and triples.
#[derive(Clone, Debug, Default)]
pub struct QuasiMetricReport {
    pub pairs: usize,
    pub triples: usize,
    pub symmetric_pairs: usize,
    pub mixed_pairs: usize,
    pub sandwich_checks: usize,
    pub violations: Vec<String>,
}

impl QuasiMetricReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// a ≤ b + c for p-values with a common exponent, ∞ on the right always passing.
fn triangle_holds<S: Scalar>(
    a: &Extended<PValue<S>>,
    b: &Extended<PValue<S>>,
    c: &Extended<PValue<S>>,
    tol: f64,
    root_tol: f64,
) -> bool {
    let (b, c) = match (b, c) {
        (Extended::Finite(b), Extended::Finite(c)) => (b, c),
        _ => return true,
    };
    let a = match a {
        Extended::Finite(a) => a,
        Extended::Infinite => return false,
    };
    match a.p {
        PExponent::Finite(1) | PExponent::Infinity => a.power.le_tol(&(b.power.clone() + c.power.clone()), tol),
        PExponent::Finite(2) => {
            // √A ≤ √B + √C  ⟺  A − B − C ≤ 0  or  (A − B − C)² ≤ 4BC
            let lhs = a.power.clone() - b.power.clone() - c.power.clone();
            if lhs.le_tol(&S::zero(), tol) {
                return true;
            }
            let four = S::from_usize(4);
            (lhs.clone() * lhs).le_tol(&(four * b.power.clone() * c.power.clone()), tol)
        }
        PExponent::Finite(_) => {
            let (va, vb, vc) = (a.value_f64(), b.value_f64(), c.value_f64());
            va <= (vb + vc) * (1.0 + root_tol) + root_tol
        }
    }
}

fn show<S: Scalar>(v: &Extended<PValue<S>>) -> String {
    match v {
        Extended::Finite(pv) => format!("{}", pv.power),
        Extended::Infinite => "inf".into(),
    }
}

/// Runs the exact solver on every ordered pair and checks nonnegativity,
/// identity of indiscernibles, the triangle inequality, symmetry on uniform
/// equal-size pairs, one-sided infinity on mixed sizes and (for p = 1) the
/// lower-bound sandwich.
pub fn quasi_metric_suite<S: Scalar>(
    spaces: &[FiniteMMSpace<S>],
    p: PExponent,
    opts: SuiteOptions,
) -> Result<QuasiMetricReport> {
    let k = spaces.len();
    let mut d: Vec<Vec<GMResult<S>>> = Vec::with_capacity(k);
    for x in spaces {
        let mut row = Vec::with_capacity(k);
        for y in spaces {
            row.push(gm_exact_with_guard(x, y, p, opts.guard)?);
        }
        d.push(row);
    }
    let tol = spaces.iter().map(|s| s.tol()).fold(0.0, f64::max);
    let mut rep = QuasiMetricReport::default();
    let zero = S::zero();
    for i in 0..k {
        for j in 0..k {
            rep.pairs += 1;
            let r = &d[i][j];
            if let Extended::Finite(v) = &r.value {
                if v.power.cmp_total(&zero) == Ordering::Less {
                    rep.violations.push(format!("negative distance ({i},{j}) = {}", v.power));
                }
                if v.is_zero() {
                    let w = r.witness.as_ref().expect("finite results carry a witness");
                    if !is_isomorphism(&spaces[i], &spaces[j], w) {
                        rep.violations.push(format!("zero distance ({i},{j}) without an isomorphism witness"));
                    }
                }
            }
            if i == j && !r.value.finite().is_some_and(|v| v.is_zero()) {
                rep.violations.push(format!("self distance of {i} is {}", show(&r.value)));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if i == j || j == l || i == l {
                    continue;
                }
                rep.triples += 1;
                if !triangle_holds(&d[i][l].value, &d[i][j].value, &d[j][l].value, tol, opts.root_tol) {
                    rep.violations.push(format!(
                        "triangle ({i},{l}) = {} > ({i},{j}) = {} + ({j},{l}) = {}",
                        show(&d[i][l].value),
                        show(&d[i][j].value),
                        show(&d[j][l].value)
                    ));
                }
            }
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let (x, y) = (&spaces[i], &spaces[j]);
            if x.n() == y.n() && x.is_uniform() && y.is_uniform() {
                rep.symmetric_pairs += 1;
                let same = match (&d[i][j].value, &d[j][i].value) {
                    (Extended::Finite(a), Extended::Finite(b)) => a.power.eq_tol(&b.power, tol),
                    (Extended::Infinite, Extended::Infinite) => true,
                    _ => false,
                };
                if !same {
                    rep.violations.push(format!(
                        "asymmetric uniform pair ({i},{j}): {} vs {}",
                        show(&d[i][j].value),
                        show(&d[j][i].value)
                    ));
                }
            }
            if x.n() != y.n() {
                rep.mixed_pairs += 1;
                if !d[i][j].value.is_infinite() && !d[j][i].value.is_infinite() {
                    rep.violations.push(format!("mixed-size pair ({i},{j}) is finite both ways"));
                }
            }
        }
    }
    if opts.sandwich && p == PExponent::Finite(1) {
        for i in 0..k {
            for j in 0..k {
                let Extended::Finite(gm) = &d[i][j].value else { continue };
                let (x, y) = (&spaces[i], &spaces[j]);
                rep.sandwich_checks += 1;
                let lhu = lower_bound_local_kantorovich(x, y)?.1;
                let lh = lower_bound_local_monge(x, y, MapClass::All)?;
                let lg = lower_bound_global(x, y, p)?.power;
                if !lg.le_tol(&gm.power, tol) {
                    rep.violations.push(format!("L_H({i},{j}) = {lg} exceeds d_GM = {}", gm.power));
                }
                match lh {
                    Extended::Finite(a) => {
                        if !lhu.le_tol(&a.cost, tol) || !a.cost.le_tol(&gm.power, tol) {
                            rep.violations.push(format!(
                                "sandwich ({i},{j}): L_h^U = {lhu}, L_h = {}, d_GM = {}",
                                a.cost, gm.power
                            ));
                        }
                    }
                    Extended::Infinite => {
                        rep.violations.push(format!("L_h({i},{j}) infinite below a finite d_GM"));
                    }
                }
            }
        }
    }
    Ok(rep)
}
