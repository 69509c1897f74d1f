use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{Extended, Scalar};
use crate::space::MeasurePreservingMap;

/// Nonnegative cost matrix c(x, y).
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> CostMatrix<S> {
    pub fn new(m: Vec<Vec<S>>) -> Result<Self> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 || m.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("cost matrix must be a nonempty rectangle".into()));
        }
        let data: Vec<S> = m.into_iter().flatten().collect();
        let zero = S::zero();
        if data.iter().any(|c| c.cmp_total(&zero) == Ordering::Less) {
            return Err(Error::InvalidInput("costs must be nonnegative".into()));
        }
        Ok(CostMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn to_matrix(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        CostMatrix { rows: self.cols, cols: self.rows, data }
    }
}

/// An optimal Monge assignment and its cost Σ_x w_X(x)·C(x, φ(x)).
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment<S> {
    pub map: MeasurePreservingMap,
    pub cost: S,
}

/// Size guard for the exhaustive general-weight search.
pub const DEFAULT_ASSIGNMENT_GUARD: usize = 12;

fn all_equal<S: Scalar>(w: &[S], tol: f64) -> bool {
    w.iter().all(|v| v.eq_tol(&w[0], tol))
}

/// Minimizes Σ_x w_X(x)·C(x, φ(x)) over measure-preserving maps.
///
/// Uniform weights with n_X = k·n_Y reduce to a square assignment problem on
/// targets duplicated k times. Other weights use branch-and-bound over
/// assignments with fiber-capacity pruning, limited to n_X ≤ `guard`.
pub fn solve_assignment<S: Scalar>(
    c: &CostMatrix<S>,
    wx: &[S],
    wy: &[S],
    tol: f64,
    guard: usize,
) -> Result<Extended<Assignment<S>>> {
    let (nx, ny) = (c.rows(), c.cols());
    if wx.len() != nx || wy.len() != ny {
        return Err(Error::InvalidInput("weight vectors do not match the cost matrix".into()));
    }
    if nx < ny {
        return Ok(Extended::Infinite);
    }
    if all_equal(wx, tol) && all_equal(wy, tol) {
        if nx % ny != 0 {
            return Ok(Extended::Infinite);
        }
        let k = nx / ny;
        let expanded: Vec<Vec<S>> =
            (0..nx).map(|i| (0..nx).map(|j| c.get(i, j / k).clone()).collect()).collect();
        let cols = hungarian(&expanded);
        let assignment: Vec<usize> = cols.iter().map(|&j| j / k).collect();
        let total = (0..nx).fold(S::zero(), |a, i| a + c.get(i, assignment[i]).clone());
        let cost = wx[0].clone() * total;
        return Ok(Extended::Finite(Assignment { map: MeasurePreservingMap::new_unchecked(assignment), cost }));
    }
    if nx > guard {
        return Err(Error::SizeLimitExceeded(format!(
            "weighted Monge assignment with {nx} source points exceeds the guard {guard}"
        )));
    }
    Ok(weighted_branch_and_bound(c, wx, wy, tol))
}

/// Minimum-cost perfect matching of rows into columns (rows ≤ cols) by the
/// shortest augmenting path method with potentials. Returns the column of each row.
pub fn hungarian<S: Scalar>(cost: &[Vec<S>]) -> Vec<usize> {
    let n = cost.len();
    let m = cost.first().map_or(0, |r| r.len());
    assert!(n <= m, "hungarian needs rows <= cols");
    let mut u = vec![S::zero(); n + 1];
    let mut v = vec![S::zero(); m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<S>> = vec![None; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<S> = None;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|mv| cur.cmp_total(mv) == Ordering::Less) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().unwrap();
                if delta.as_ref().is_none_or(|d| mj.cmp_total(d) == Ordering::Less) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("a free column always exists");
            for j in 0..=m {
                if used[j] {
                    u[p[j]] = u[p[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(mv) = minv[j].as_mut() {
                    *mv = mv.clone() - delta.clone();
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            ans[p[j] - 1] = j - 1;
        }
    }
    ans
}

struct Bnb<'a, S> {
    c: &'a CostMatrix<S>,
    wx: &'a [S],
    tol: f64,
    suffix_min: Vec<S>,
    cap: Vec<S>,
    current: Vec<usize>,
    best: Option<(S, Vec<usize>)>,
}

impl<S: Scalar> Bnb<'_, S> {
    fn search(&mut self, x: usize, partial: S) {
        if let Some((b, _)) = &self.best {
            let bound = partial.clone() + self.suffix_min[x].clone();
            if bound.cmp_total(b) != Ordering::Less {
                return;
            }
        }
        if x == self.wx.len() {
            let zero = S::zero();
            if self.cap.iter().all(|r| r.eq_tol(&zero, self.tol)) {
                self.best = Some((partial, self.current.clone()));
            }
            return;
        }
        let zero = S::zero();
        for y in 0..self.cap.len() {
            let rest = self.cap[y].clone() - self.wx[x].clone();
            if !zero.le_tol(&rest, self.tol) {
                continue;
            }
            let saved = std::mem::replace(&mut self.cap[y], rest);
            self.current.push(y);
            let step = self.wx[x].clone() * self.c.get(x, y).clone();
            self.search(x + 1, partial.clone() + step);
            self.current.pop();
            self.cap[y] = saved;
        }
    }
}

fn weighted_branch_and_bound<S: Scalar>(c: &CostMatrix<S>, wx: &[S], wy: &[S], tol: f64) -> Extended<Assignment<S>> {
    let nx = c.rows();
    let mut suffix_min = vec![S::zero(); nx + 1];
    for x in (0..nx).rev() {
        let row_min = (0..c.cols())
            .map(|y| c.get(x, y).clone())
            .reduce(|a, b| if b.cmp_total(&a) == Ordering::Less { b } else { a })
            .unwrap();
        suffix_min[x] = suffix_min[x + 1].clone() + wx[x].clone() * row_min;
    }
    let mut bnb = Bnb { c, wx, tol, suffix_min, cap: wy.to_vec(), current: Vec::with_capacity(nx), best: None };
    bnb.search(0, S::zero());
    match bnb.best {
        Some((cost, a)) => Extended::Finite(Assignment { map: MeasurePreservingMap::new_unchecked(a), cost }),
        None => Extended::Infinite,
    }
}
