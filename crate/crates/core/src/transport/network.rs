//! Exact transportation simplex (the network simplex specialized to bipartite
//! transport). Pivots follow Bland's rule, so degenerate instances terminate
//! and the returned basis is deterministic.

use std::any::Any;
use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::assignment::CostMatrix;
use crate::error::{Error, Result};
use crate::scalar::{common_denominator, Rational, Scalar};
use crate::space::Coupling;

/// Numbers the simplex can pivot on: only addition, subtraction and order are needed.
pub trait FlowNum: Clone + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Zero {
    fn is_neg(&self) -> bool;
}

impl FlowNum for BigInt {
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

impl FlowNum for Rational {
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

impl FlowNum for f64 {
    fn is_neg(&self) -> bool {
        *self < -1e-12
    }
}

/// Basis of the transport LP: a spanning tree on rows ∪ columns.
struct Basis<T> {
    n: usize,
    m: usize,
    cells: Vec<(usize, usize)>,
    flow: Vec<T>,
}

impl<T: FlowNum> Basis<T> {
    fn northwest(mut a: Vec<T>, mut b: Vec<T>) -> Self {
        let (n, m) = (a.len(), b.len());
        let mut cells = Vec::with_capacity(n + m - 1);
        let mut flow = Vec::with_capacity(n + m - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let q = if a[i] < b[j] { a[i].clone() } else { b[j].clone() };
            a[i] = a[i].clone() - q.clone();
            b[j] = b[j].clone() - q.clone();
            cells.push((i, j));
            flow.push(q);
            if i == n - 1 && j == m - 1 {
                break;
            }
            if (a[i].is_zero() && i < n - 1) || j == m - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Basis { n, m, cells, flow }
    }

    /// Potentials with u_0 = 0 plus BFS parent edges for path queries.
    fn tree(&self, c: &[Vec<T>]) -> (Vec<T>, Vec<T>, Vec<Option<usize>>, Vec<usize>) {
        let total = self.n + self.m;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        for (k, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push(k);
            adj[self.n + j].push(k);
        }
        let mut pot: Vec<Option<T>> = vec![None; total];
        let mut parent: Vec<Option<usize>> = vec![None; total];
        let mut depth = vec![0usize; total];
        pot[0] = Some(T::zero());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &k in &adj[v] {
                let (i, j) = self.cells[k];
                let w = if v == i { self.n + j } else { i };
                if pot[w].is_some() {
                    continue;
                }
                let pv = pot[v].clone().unwrap();
                // u_i + v_j = c_ij
                pot[w] = Some(c[i][j].clone() - pv);
                parent[w] = Some(k);
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
        let pot: Vec<T> = pot.into_iter().map(|p| p.expect("basis spans all nodes")).collect();
        let u = pot[..self.n].to_vec();
        let v = pot[self.n..].to_vec();
        (u, v, parent, depth)
    }

    fn other_end(&self, k: usize, node: usize) -> usize {
        let (i, j) = self.cells[k];
        if node == i && node < self.n {
            self.n + j
        } else {
            i
        }
    }
}

/// Solves min Σ c_ij f_ij subject to row sums a, column sums b, f ≥ 0.
/// Requires Σa = Σb (exactly for exact fields).
pub fn transport_simplex<T: FlowNum>(c: &[Vec<T>], a: Vec<T>, b: Vec<T>) -> Vec<Vec<T>> {
    let (n, m) = (a.len(), b.len());
    let mut basis = Basis::northwest(a, b);
    loop {
        let (u, v, parent, depth) = basis.tree(c);
        let mut in_basis = vec![false; n * m];
        for &(i, j) in &basis.cells {
            in_basis[i * m + j] = true;
        }
        let mut entering = None;
        'scan: for i in 0..n {
            for j in 0..m {
                if in_basis[i * m + j] {
                    continue;
                }
                let r = c[i][j].clone() - u[i].clone() - v[j].clone();
                if r.is_neg() {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((ei, ej)) = entering else { break };
        // tree path from column ej to row ei
        let mut from_col = Vec::new();
        let mut from_row = Vec::new();
        let (mut x, mut y) = (n + ej, ei);
        while x != y {
            if depth[x] >= depth[y] {
                let k = parent[x].unwrap();
                from_col.push(k);
                x = basis.other_end(k, x);
            } else {
                let k = parent[y].unwrap();
                from_row.push(k);
                y = basis.other_end(k, y);
            }
        }
        from_row.reverse();
        let path: Vec<usize> = from_col.into_iter().chain(from_row).collect();
        // signs alternate −, +, −, … starting next to the entering column
        let mut leave: Option<usize> = None;
        for (pos, &k) in path.iter().enumerate() {
            if pos % 2 == 1 {
                continue;
            }
            leave = Some(match leave {
                None => k,
                Some(l) => {
                    let (fl, fk) = (&basis.flow[l], &basis.flow[k]);
                    let (cl, ck) = (basis.cells[l], basis.cells[k]);
                    if fk < fl || (!(fl < fk) && ck.0 * m + ck.1 < cl.0 * m + cl.1) {
                        k
                    } else {
                        l
                    }
                }
            });
        }
        let leave = leave.expect("cycle has a decreasing edge");
        let theta = basis.flow[leave].clone();
        for (pos, &k) in path.iter().enumerate() {
            basis.flow[k] = if pos % 2 == 0 {
                basis.flow[k].clone() - theta.clone()
            } else {
                basis.flow[k].clone() + theta.clone()
            };
        }
        basis.cells[leave] = (ei, ej);
        basis.flow[leave] = theta;
    }
    let mut f = vec![vec![T::zero(); m]; n];
    for (k, &(i, j)) in basis.cells.iter().enumerate() {
        f[i][j] = basis.flow[k].clone();
    }
    f
}

fn scale_to_int(xs: &[Rational], den: &BigInt) -> Vec<BigInt> {
    xs.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect()
}

fn solve_rational(c: &CostMatrix<Rational>, wx: &[Rational], wy: &[Rational]) -> (Vec<Vec<Rational>>, Rational) {
    let cm = c.to_matrix();
    let dc = common_denominator(cm.iter().flatten());
    let dm = common_denominator(wx.iter().chain(wy));
    let ci: Vec<Vec<BigInt>> = cm.iter().map(|r| scale_to_int(r, &dc)).collect();
    let f = transport_simplex(&ci, scale_to_int(wx, &dm), scale_to_int(wy, &dm));
    let mut obj = BigInt::zero();
    for i in 0..f.len() {
        for j in 0..f[i].len() {
            obj += &ci[i][j] * &f[i][j];
        }
    }
    let dmr = Rational::from_integer(dm.clone());
    let plan = f
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rational::from_integer(x) / dmr.clone()).collect())
        .collect();
    (plan, Rational::new(obj, dc * dm))
}

/// Optimal coupling for the cost C and its value. Exact on rationals.
pub fn solve_kantorovich<S: Scalar>(c: &CostMatrix<S>, wx: &[S], wy: &[S], tol: f64) -> Result<(Coupling<S>, S)> {
    if wx.len() != c.rows() || wy.len() != c.cols() {
        return Err(Error::InvalidInput("weight vectors do not match the cost matrix".into()));
    }
    let sx = wx.iter().fold(S::zero(), |a, b| a + b.clone());
    let sy = wy.iter().fold(S::zero(), |a, b| a + b.clone());
    if !sx.eq_tol(&sy, tol * (wx.len() + wy.len()) as f64) {
        return Err(Error::InvalidInput(format!("marginals have different mass {sx} vs {sy}")));
    }
    let any_c: &dyn Any = c;
    let (plan, value): (Vec<Vec<S>>, S) = if let Some(cr) = any_c.downcast_ref::<CostMatrix<Rational>>() {
        let as_r = |w: &[S]| -> Vec<Rational> {
            w.iter().map(|x| (x as &dyn Any).downcast_ref::<Rational>().unwrap().clone()).collect()
        };
        let (plan, value) = solve_rational(cr, &as_r(wx), &as_r(wy));
        let back = |x: Rational| S::from_rational(&x);
        (plan.into_iter().map(|r| r.into_iter().map(back).collect()).collect(), back(value))
    } else {
        let cf: Vec<Vec<f64>> = c.to_matrix().iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
        let wxf: Vec<f64> = wx.iter().map(|x| x.to_f64()).collect();
        let mut wyf: Vec<f64> = wy.iter().map(|x| x.to_f64()).collect();
        // absorb float round-off in the last column
        let last = wyf.len() - 1;
        wyf[last] += sx.to_f64() - sy.to_f64();
        let plan = transport_simplex(&cf, wxf, wyf);
        let mut value = 0.0;
        for i in 0..plan.len() {
            for j in 0..plan[i].len() {
                value += plan[i][j] * cf[i][j];
            }
        }
        let back = |x: f64| (&x as &dyn Any).downcast_ref::<S>().expect("scalars are rational or f64").clone();
        (plan.into_iter().map(|r| r.into_iter().map(back).collect()).collect(), back(value))
    };
    let flat = plan.into_iter().flatten().collect();
    Ok((Coupling::from_flat_unchecked(c.rows(), c.cols(), flat), value))
}
