//! Global and local distance distributions and the lower bounds L_H, L_h, L_h^U.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{Extended, PExponent, PValue, Scalar};
use crate::space::{Coupling, FiniteMMSpace, MeasurePreservingMap};
use crate::transport::{
    solve_assignment, solve_kantorovich, w1_cdf, wp_quantile, Assignment, CostMatrix, StepCDF,
    DEFAULT_ASSIGNMENT_GUARD,
};

/// H_X(r) = μ⊗μ{d(x,x') ≤ r} over all ordered pairs, diagonal included.
pub fn global_distribution<S: Scalar>(x: &FiniteMMSpace<S>) -> StepCDF<S> {
    let n = x.n();
    let mut pairs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pairs.push((x.d(i, j).clone(), x.w(i).clone() * x.w(j).clone()));
        }
    }
    StepCDF::from_weighted(pairs).expect("a valid space has a valid distance distribution")
}

/// h_X(x, ·) for a single point.
pub fn local_distribution_at<S: Scalar>(x: &FiniteMMSpace<S>, i: usize) -> StepCDF<S> {
    let pairs = (0..x.n()).map(|j| (x.d(i, j).clone(), x.w(j).clone())).collect();
    StepCDF::from_weighted(pairs).expect("a valid space has valid local distributions")
}

/// h_X(x, ·) for every point.
pub fn local_distribution<S: Scalar>(x: &FiniteMMSpace<S>) -> Vec<StepCDF<S>> {
    (0..x.n()).into_par_iter().map(|i| local_distribution_at(x, i)).collect()
}

/// c(x, y) = ∫ |h_X(x,t) − h_Y(y,t)| dt.
pub fn cost_function<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>) -> CostMatrix<S> {
    let hx = local_distribution(x);
    let hy = local_distribution(y);
    let rows: Vec<Vec<S>> = hx.par_iter().map(|fx| hy.iter().map(|fy| w1_cdf(fx, fy)).collect()).collect();
    CostMatrix::new(rows).expect("w1 values are nonnegative")
}

/// L_H: ∫|H_X − H_Y| for p = 1, and the quantile form ∫₀¹|H_X⁻¹ − H_Y⁻¹|^p du otherwise.
/// The returned p-value stores the p-th power.
pub fn lower_bound_global<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, p: PExponent) -> Result<PValue<S>> {
    let hx = global_distribution(x);
    let hy = global_distribution(y);
    match p {
        PExponent::Finite(1) => Ok(PValue::new(p, w1_cdf(&hx, &hy))),
        PExponent::Finite(_) => Ok(PValue::new(p, wp_quantile(&hx, &hy, p)?)),
        PExponent::Infinity => Err(Error::Unsupported("L_H for p = inf".into())),
    }
}

/// Admissible maps for the local Monge bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapClass {
    All,
    Bijective,
}

/// L_h = inf over measure-preserving maps of Σ_x w_X(x)·c(x, φ(x)).
pub fn lower_bound_local_monge<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    class: MapClass,
) -> Result<Extended<Assignment<S>>> {
    if class == MapClass::Bijective && x.n() != y.n() {
        return Ok(Extended::Infinite);
    }
    let c = cost_function(x, y);
    solve_assignment(&c, x.weights(), y.weights(), x.tol().max(y.tol()), DEFAULT_ASSIGNMENT_GUARD)
}

/// L_h^U = inf over couplings of ∫ c dμ.
pub fn lower_bound_local_kantorovich<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>) -> Result<(Coupling<S>, S)> {
    let c = cost_function(x, y);
    solve_kantorovich(&c, x.weights(), y.weights(), x.tol().max(y.tol()))
}

/// Σ_x w_X(x)·c(x, φ(x)) for a given map, without building the full cost matrix.
pub fn local_map_cost<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, phi: &MeasurePreservingMap) -> Result<S> {
    if !crate::space::pushforward_check(x, y, phi.assignment()) {
        return Err(Error::NotMeasurePreserving(format!("{:?}", phi.assignment())));
    }
    let terms: Vec<S> = (0..x.n())
        .into_par_iter()
        .map(|i| {
            let c = w1_cdf(&local_distribution_at(x, i), &local_distribution_at(y, phi.apply(i)));
            x.w(i).clone() * c
        })
        .collect();
    Ok(terms.into_iter().fold(S::zero(), |a, b| a + b))
}
