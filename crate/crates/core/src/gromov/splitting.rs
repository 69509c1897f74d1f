use crate::error::Result;
use crate::scalar::{PExponent, PValue, Scalar};
use crate::space::{Coupling, FiniteMMSpace, MeasurePreservingMap, SpaceOptions};

/// A pseudo-mm-space Z with a measure-preserving projection onto a base space,
/// carrying the pulled-back distance.
#[derive(Clone, Debug)]
pub struct MassSplitting<S> {
    pub space: FiniteMMSpace<S>,
    pub projection: MeasurePreservingMap,
}

/// Builds Z = supp(μ) ⊂ X × Y with d_Z = π_X^* d_X and weights μ, together with
/// the map π_Y : Z → Y. Support cells are listed in row-major order.
pub fn mass_splitting_from_coupling<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    mu: &Coupling<S>,
) -> Result<(MassSplitting<S>, MeasurePreservingMap)> {
    mu.validate(x.weights(), y.weights(), x.tol().max(y.tol()))?;
    let cells = mu.support();
    let n = cells.len();
    let mut dist = Vec::with_capacity(n * n);
    for &(a, _) in &cells {
        for &(b, _) in &cells {
            dist.push(x.d(a, b).clone());
        }
    }
    let weights: Vec<S> = cells.iter().map(|&(i, j)| mu.get(i, j).clone()).collect();
    let opts = SpaceOptions { pseudo: true, check_triangle: false, tol: x.tol().max(y.tol()) };
    let z = FiniteMMSpace::from_flat(n, dist, weights, opts)?;
    let px = MeasurePreservingMap::new(&z, x, cells.iter().map(|c| c.0).collect())?;
    let py = MeasurePreservingMap::new(&z, y, cells.iter().map(|c| c.1).collect())?;
    Ok((MassSplitting { space: z, projection: px }, py))
}

/// Σ μ(x,y) μ(x',y') |d_X(x,x') − d_Y(y,y')|^p over the support (max for p = ∞).
pub fn gw_objective<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, mu: &Coupling<S>, p: PExponent) -> PValue<S> {
    let cells = mu.support();
    let mut acc = S::zero();
    for &(a, b) in &cells {
        for &(c, d) in &cells {
            let g = (x.d(a, c).clone() - y.d(b, d).clone()).abs_val();
            match p {
                PExponent::Finite(pp) => {
                    if !g.is_zero() {
                        acc = acc + mu.get(a, b).clone() * mu.get(c, d).clone() * g.powu(pp);
                    }
                }
                PExponent::Infinity => acc = S::max_of(acc, g),
            }
        }
    }
    PValue::new(p, acc)
}
