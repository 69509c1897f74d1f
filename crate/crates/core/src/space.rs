//! Finite (pseudo-)metric measure spaces, measure-preserving maps and couplings.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{PExponent, PValue, Scalar};

/// Default absolute tolerance for float-valued spaces.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A finite metric measure space, or pseudo-metric measure space when `pseudo`
/// is set (distinct points may then sit at distance zero).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMMSpace<S> {
    n: usize,
    dist: Vec<S>,
    weights: Vec<S>,
    pseudo: bool,
    tol: f64,
}

/// Construction options.
#[derive(Clone, Copy, Debug)]
pub struct SpaceOptions {
    pub pseudo: bool,
    /// The O(n³) triangle check; generators that build metrics from geometry skip it.
    pub check_triangle: bool,
    pub tol: f64,
}

impl Default for SpaceOptions {
    fn default() -> Self {
        SpaceOptions { pseudo: false, check_triangle: true, tol: DEFAULT_TOL }
    }
}

impl<S: Scalar> FiniteMMSpace<S> {
    pub fn new(dist: Vec<Vec<S>>, weights: Vec<S>) -> Result<Self> {
        Self::with_options(dist, weights, SpaceOptions::default())
    }

    pub fn with_options(dist: Vec<Vec<S>>, weights: Vec<S>, opts: SpaceOptions) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidSpace("empty space".into()));
        }
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpace(format!("distance matrix is not {n}x{n}")));
        }
        let flat: Vec<S> = dist.into_iter().flatten().collect();
        Self::from_flat(n, flat, weights, opts)
    }

    /// Uniform weights 1/n.
    pub fn uniform(dist: Vec<Vec<S>>) -> Result<Self> {
        let n = dist.len();
        let w = vec![S::one() / S::from_usize(n.max(1)); n];
        Self::new(dist, w)
    }

    pub fn uniform_with_options(dist: Vec<Vec<S>>, opts: SpaceOptions) -> Result<Self> {
        let n = dist.len();
        let w = vec![S::one() / S::from_usize(n.max(1)); n];
        Self::with_options(dist, w, opts)
    }

    pub fn from_flat(n: usize, dist: Vec<S>, weights: Vec<S>, opts: SpaceOptions) -> Result<Self> {
        let tol = opts.tol;
        if dist.len() != n * n || weights.len() != n {
            return Err(Error::InvalidSpace("dimension mismatch".into()));
        }
        let zero = S::zero();
        for i in 0..n {
            if !dist[i * n + i].eq_tol(&zero, tol) {
                return Err(Error::InvalidSpace(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = &dist[i * n + j];
                if !zero.le_tol(d, tol) {
                    return Err(Error::InvalidSpace(format!("negative distance at ({i},{j})")));
                }
                if !d.eq_tol(&dist[j * n + i], tol) {
                    return Err(Error::InvalidSpace(format!("asymmetric at ({i},{j})")));
                }
                if i != j && !opts.pseudo && d.eq_tol(&zero, tol) {
                    return Err(Error::InvalidSpace(format!(
                        "distinct points {i},{j} at distance 0 in a non-pseudo space"
                    )));
                }
            }
        }
        let mut total = S::zero();
        for (i, w) in weights.iter().enumerate() {
            if w.cmp_total(&zero) != Ordering::Greater || w.eq_tol(&zero, 0.0) {
                return Err(Error::InvalidSpace(format!("weight {i} is not strictly positive")));
            }
            total = total + w.clone();
        }
        if !total.eq_tol(&S::one(), tol * n as f64) {
            return Err(Error::InvalidSpace(format!("weights sum to {total}, not 1")));
        }
        if opts.check_triangle {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = &dist[i * n + k];
                        let rhs = dist[i * n + j].clone() + dist[j * n + k].clone();
                        if !lhs.le_tol(&rhs, tol) {
                            return Err(Error::InvalidSpace(format!("triangle inequality fails at ({i},{j},{k})")));
                        }
                    }
                }
            }
        }
        Ok(FiniteMMSpace { n, dist, weights, pseudo: opts.pseudo, tol })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self, i: usize, j: usize) -> &S {
        &self.dist[i * self.n + j]
    }

    pub fn w(&self, i: usize) -> &S {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn is_pseudo(&self) -> bool {
        self.pseudo
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dist_matrix(&self) -> Vec<Vec<S>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| w.eq_tol(&self.weights[0], self.tol))
    }

    pub fn diameter(&self) -> S {
        self.dist.iter().cloned().fold(S::zero(), S::max_of)
    }

    /// The space with points relabeled: new point `i` is old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut dist = Vec::with_capacity(n * n);
        for &a in perm {
            for &b in perm {
                dist.push(self.d(a, b).clone());
            }
        }
        let weights = perm.iter().map(|&a| self.weights[a].clone()).collect();
        FiniteMMSpace { n, dist, weights, pseudo: self.pseudo, tol: self.tol }
    }

    /// Converts to another scalar field via f64 or exact embedding.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FiniteMMSpace<T> {
        FiniteMMSpace {
            n: self.n,
            dist: self.dist.iter().map(&f).collect(),
            weights: self.weights.iter().map(&f).collect(),
            pseudo: self.pseudo,
            tol: self.tol,
        }
    }

    pub fn to_float(&self) -> FiniteMMSpace<f64> {
        self.map_scalar(|x| x.to_f64())
    }
}

/// A measure-preserving map X → Y as an assignment array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurePreservingMap {
    assignment: Vec<usize>,
}

impl MeasurePreservingMap {
    /// Validates the fiber-sum condition.
    pub fn new<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, assignment: Vec<usize>) -> Result<Self> {
        if !pushforward_check(x, y, &assignment) {
            return Err(Error::NotMeasurePreserving(format!("{assignment:?}")));
        }
        Ok(MeasurePreservingMap { assignment })
    }

    /// Skips validation; callers must guarantee the fiber-sum condition.
    pub fn new_unchecked(assignment: Vec<usize>) -> Self {
        MeasurePreservingMap { assignment }
    }

    pub fn identity(n: usize) -> Self {
        MeasurePreservingMap { assignment: (0..n).collect() }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// A transport plan with prescribed marginals.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling<S> {
    rows: usize,
    cols: usize,
    plan: Vec<S>,
}

impl<S: Scalar> Coupling<S> {
    pub fn new(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, plan: Vec<Vec<S>>) -> Result<Self> {
        let rows = x.n();
        let cols = y.n();
        if plan.len() != rows || plan.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidCoupling(format!("plan is not {rows}x{cols}")));
        }
        let flat: Vec<S> = plan.into_iter().flatten().collect();
        let c = Coupling { rows, cols, plan: flat };
        c.validate(x.weights(), y.weights(), x.tol().max(y.tol()))?;
        Ok(c)
    }

    pub fn from_flat_unchecked(rows: usize, cols: usize, plan: Vec<S>) -> Self {
        Coupling { rows, cols, plan }
    }

    pub fn validate(&self, wx: &[S], wy: &[S], tol: f64) -> Result<()> {
        if wx.len() != self.rows || wy.len() != self.cols {
            return Err(Error::InvalidCoupling("marginal dimension mismatch".into()));
        }
        let zero = S::zero();
        if let Some(e) = self.plan.iter().find(|e| !zero.le_tol(e, tol)) {
            return Err(Error::InvalidCoupling(format!("negative entry {e}")));
        }
        for i in 0..self.rows {
            let s = self.row(i).iter().cloned().fold(S::zero(), |a, b| a + b);
            if !s.eq_tol(&wx[i], tol * self.cols as f64) {
                return Err(Error::InvalidCoupling(format!("row {i} sums to {s}, expected {}", wx[i])));
            }
        }
        for j in 0..self.cols {
            let s = (0..self.rows).map(|i| self.get(i, j).clone()).fold(S::zero(), |a, b| a + b);
            if !s.eq_tol(&wy[j], tol * self.rows as f64) {
                return Err(Error::InvalidCoupling(format!("column {j} sums to {s}, expected {}", wy[j])));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.plan[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.plan[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_matrix(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Support cells in row-major order.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let zero = S::zero();
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j).cmp_total(&zero) == Ordering::Greater {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Σ plan(i,j)·C(i,j).
    pub fn cost(&self, c: &[Vec<S>]) -> S {
        let mut acc = S::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let m = self.get(i, j);
                if !m.is_zero() {
                    acc = acc + m.clone() * c[i][j].clone();
                }
            }
        }
        acc
    }
}

fn check_index(n: usize, i: usize, what: &str) -> Result<()> {
    if i < n {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} index {i} out of range 0..{n}")))
    }
}

/// Γ(x, y, x', y') = |d_X(x,x') − d_Y(y,y')|.
pub fn distortion<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    xi: usize,
    yi: usize,
    xj: usize,
    yj: usize,
) -> Result<S> {
    check_index(x.n(), xi, "x")?;
    check_index(x.n(), xj, "x'")?;
    check_index(y.n(), yi, "y")?;
    check_index(y.n(), yj, "y'")?;
    Ok((x.d(xi, xj).clone() - y.d(yi, yj).clone()).abs_val())
}

/// True iff every fiber of `assignment` carries exactly the target weight.
pub fn pushforward_check<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, assignment: &[usize]) -> bool {
    if assignment.len() != x.n() || assignment.iter().any(|&t| t >= y.n()) {
        return false;
    }
    let mut fiber = vec![S::zero(); y.n()];
    for (i, &t) in assignment.iter().enumerate() {
        fiber[t] = fiber[t].clone() + x.w(i).clone();
    }
    let tol = x.tol().max(y.tol()) * x.n() as f64;
    fiber.iter().zip(y.weights()).all(|(f, w)| f.eq_tol(w, tol))
}

/// Σ_{x,x'} w_x w_{x'} |d_X(x,x') − d_Y(φx,φx')|^p as a p-value (max for p = ∞).
pub fn map_cost<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    phi: &MeasurePreservingMap,
    p: PExponent,
) -> Result<PValue<S>> {
    if !pushforward_check(x, y, phi.assignment()) {
        return Err(Error::NotMeasurePreserving(format!("{:?}", phi.assignment())));
    }
    Ok(map_cost_unchecked(x, y, phi.assignment(), p))
}

pub(crate) fn map_cost_unchecked<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    a: &[usize],
    p: PExponent,
) -> PValue<S> {
    let n = x.n();
    let mut acc = S::zero();
    match p {
        PExponent::Finite(pp) => {
            for i in 0..n {
                let mut row = S::zero();
                for j in 0..n {
                    let g = (x.d(i, j).clone() - y.d(a[i], a[j]).clone()).abs_val();
                    if !g.is_zero() {
                        row = row + x.w(j).clone() * g.powu(pp);
                    }
                }
                if !row.is_zero() {
                    acc = acc + x.w(i).clone() * row;
                }
            }
        }
        PExponent::Infinity => {
            for i in 0..n {
                for j in 0..n {
                    let g = (x.d(i, j).clone() - y.d(a[i], a[j]).clone()).abs_val();
                    acc = S::max_of(acc, g);
                }
            }
        }
    }
    PValue::new(p, acc)
}

/// μ_φ = (id × φ)_# μ_X.
pub fn coupling_from_map<S: Scalar>(
    x: &FiniteMMSpace<S>,
    y: &FiniteMMSpace<S>,
    phi: &MeasurePreservingMap,
) -> Result<Coupling<S>> {
    if !pushforward_check(x, y, phi.assignment()) {
        return Err(Error::NotMeasurePreserving(format!("{:?}", phi.assignment())));
    }
    let (r, c) = (x.n(), y.n());
    let mut plan = vec![S::zero(); r * c];
    for i in 0..r {
        plan[i * c + phi.apply(i)] = x.w(i).clone();
    }
    let cp = Coupling { rows: r, cols: c, plan };
    cp.validate(x.weights(), y.weights(), x.tol().max(y.tol()))?;
    Ok(cp)
}

/// Bijective, pointwise weight-preserving and distance-preserving.
pub fn is_isomorphism<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, phi: &MeasurePreservingMap) -> bool {
    let n = x.n();
    if y.n() != n || phi.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &t in phi.assignment() {
        if t >= n || seen[t] {
            return false;
        }
        seen[t] = true;
    }
    let tol = x.tol().max(y.tol());
    for i in 0..n {
        if !x.w(i).eq_tol(y.w(phi.apply(i)), tol) {
            return false;
        }
        for j in 0..n {
            if !x.d(i, j).eq_tol(y.d(phi.apply(i), phi.apply(j)), tol) {
                return false;
            }
        }
    }
    true
}
