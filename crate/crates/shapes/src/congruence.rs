//! Rigid-motion congruence of finite point sets.
//!
//! Any isometry between two finite sets fixes their centroids and is linear on
//! the centred sets, so it is determined by the images of a basis of the span.
//! Both tests enumerate basis images with matching Gram data and then check the
//! induced map on every point. The search is complete: `false` certifies that
//! no rigid motion (reflections included) carries one set onto the other.

use std::collections::HashMap;

use gromon_core::scalar::{qi, Rational};
use nalgebra::{DMatrix, DVector};

use crate::surd::ExactField;

fn dot<F: ExactField>(a: &[F], b: &[F]) -> F {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

fn centred<F: ExactField>(pts: &[Vec<F>]) -> Vec<Vec<F>> {
    let dim = pts[0].len();
    let n = pts[0][0].from_rational_like(&qi(pts.len() as i64));
    let c: Vec<F> = (0..dim)
        .map(|k| {
            let s = pts.iter().fold(pts[0][k].zero_like(), |acc, p| acc.add(&p[k]));
            s.div(&n).expect("nonzero count")
        })
        .collect();
    pts.iter().map(|p| p.iter().zip(&c).map(|(x, y)| x.sub(y)).collect()).collect()
}

/// Inverse of a square matrix by Gauss-Jordan; None if singular.
fn invert<F: ExactField>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let k = m.len();
    let zero = m[0][0].zero_like();
    let one = zero.from_rational_like(&qi(1));
    let mut a: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = v.div(&p)?;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[k..].to_vec()).collect())
}

fn gram<F: ExactField>(vs: &[&Vec<F>]) -> Vec<Vec<F>> {
    vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily.
fn basis_indices<F: ExactField>(pts: &[Vec<F>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if chosen.len() == p.len() {
            break;
        }
        let mut trial: Vec<&Vec<F>> = chosen.iter().map(|&c| &pts[c]).collect();
        trial.push(p);
        if invert(&gram(&trial)).is_some() {
            chosen.push(i);
        }
    }
    chosen
}

/// Exact congruence over an ordered field such as the rationals or Q(√d).
pub fn congruent_exact<F: ExactField>(p: &[Vec<F>], q: &[Vec<F>]) -> bool {
    if p.len() != q.len() {
        return false;
    }
    if p.is_empty() {
        return true;
    }
    if p[0].len() != q[0].len() {
        return false;
    }
    let (p, q) = (centred(p), centred(q));
    let norms = |s: &[Vec<F>]| {
        let mut v: Vec<F> = s.iter().map(|x| dot(x, x)).collect();
        v.sort();
        v
    };
    if norms(&p) != norms(&q) {
        return false;
    }
    let basis = basis_indices(&p);
    if basis.is_empty() {
        // every point sits at the centroid
        return true;
    }
    let bvecs: Vec<&Vec<F>> = basis.iter().map(|&i| &p[i]).collect();
    let g = gram(&bvecs);
    let ginv = invert(&g).expect("basis Gram matrix is invertible");
    // coordinates of each point in the basis: c = G⁻¹ (b_i · p)
    let coords: Vec<Vec<F>> = p
        .iter()
        .map(|x| {
            let rhs: Vec<F> = bvecs.iter().map(|b| dot(b, x)).collect();
            ginv.iter().map(|row| dot(row, &rhs)).collect()
        })
        .collect();
    let mut target: HashMap<&Vec<F>, usize> = HashMap::new();
    for y in &q {
        *target.entry(y).or_default() += 1;
    }
    let mut images: Vec<usize> = Vec::new();
    search(&g, &q, &coords, &target, &mut images)
}

fn search<F: ExactField>(
    g: &[Vec<F>],
    q: &[Vec<F>],
    coords: &[Vec<F>],
    target: &HashMap<&Vec<F>, usize>,
    images: &mut Vec<usize>,
) -> bool {
    let k = images.len();
    if k == g.len() {
        let dim = q[0].len();
        let mut left = target.clone();
        for c in coords {
            let mut y: Vec<F> = vec![q[0][0].zero_like(); dim];
            for (cl, &img) in c.iter().zip(images.iter()) {
                for (yk, qk) in y.iter_mut().zip(&q[img]) {
                    *yk = yk.add(&cl.mul(qk));
                }
            }
            match left.get_mut(&y) {
                Some(m) if *m > 0 => *m -= 1,
                _ => return false,
            }
        }
        return true;
    }
    for cand in 0..q.len() {
        if images.contains(&cand) {
            continue;
        }
        let fits = dot(&q[cand], &q[cand]) == g[k][k] && images.iter().enumerate().all(|(j, &img)| dot(&q[cand], &q[img]) == g[k][j]);
        if fits {
            images.push(cand);
            if search(g, q, coords, target, images) {
                return true;
            }
            images.pop();
        }
    }
    false
}

/// Rational points on a line: congruent iff the sorted gaps agree up to reversal.
pub fn congruent_line(p: &[Rational], q: &[Rational]) -> bool {
    let pv: Vec<Vec<Rational>> = p.iter().map(|x| vec![x.clone()]).collect();
    let qv: Vec<Vec<Rational>> = q.iter().map(|x| vec![x.clone()]).collect();
    congruent_exact(&pv, &qv)
}

/// Float congruence within `tol`: candidate correspondences come from the
/// basis search, and each is refit by orthogonal Procrustes before the final
/// nearest-point check.
pub fn congruent_approx(p: &[Vec<f64>], q: &[Vec<f64>], tol: f64) -> bool {
    if p.len() != q.len() {
        return false;
    }
    if p.is_empty() {
        return true;
    }
    let dim = p[0].len();
    if q[0].len() != dim {
        return false;
    }
    let to_mat = |s: &[Vec<f64>]| {
        let m = DMatrix::from_fn(dim, s.len(), |r, c| s[c][r]);
        let mean = m.column_mean();
        let mut centred = m;
        for mut col in centred.column_iter_mut() {
            col -= &mean;
        }
        centred
    };
    let (pm, qm) = (to_mat(p), to_mat(q));
    let mut pn: Vec<f64> = pm.column_iter().map(|c| c.norm()).collect();
    let mut qn: Vec<f64> = qm.column_iter().map(|c| c.norm()).collect();
    pn.sort_by(f64::total_cmp);
    qn.sort_by(f64::total_cmp);
    if pn.iter().zip(&qn).any(|(a, b)| (a - b).abs() > tol) {
        return false;
    }
    // greedy well-conditioned basis: largest residual after projection
    let mut basis: Vec<usize> = Vec::new();
    let mut resid = pm.clone();
    for _ in 0..dim {
        let (best, norm) = resid.column_iter().enumerate().map(|(i, c)| (i, c.norm())).fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if norm <= tol {
            break;
        }
        basis.push(best);
        let u = resid.column(best) / norm;
        let proj = &u * (u.transpose() * &resid);
        resid -= proj;
    }
    if basis.is_empty() {
        return true;
    }
    let b = DMatrix::from_fn(dim, basis.len(), |r, c| pm[(r, basis[c])]);
    let g = b.transpose() * &b;
    let Some(ginv) = g.clone().try_inverse() else { return false };
    let coords = &ginv * b.transpose() * &pm;
    let mut images = Vec::new();
    approx_search(&g, &qm, &pm, &coords, tol, &mut images)
}

fn approx_search(g: &DMatrix<f64>, qm: &DMatrix<f64>, pm: &DMatrix<f64>, coords: &DMatrix<f64>, tol: f64, images: &mut Vec<usize>) -> bool {
    let k = images.len();
    let scale = tol * (1.0 + g[(0, 0)].sqrt());
    if k == g.nrows() {
        let qb = DMatrix::from_fn(qm.nrows(), k, |r, c| qm[(r, images[c])]);
        let mapped = &qb * coords;
        let Some(matching) = match_columns(&mapped, qm, 4.0 * tol) else { return false };
        // Procrustes refit on the full correspondence
        let qs = DMatrix::from_fn(qm.nrows(), qm.ncols(), |r, c| qm[(r, matching[c])]);
        let h = &qs * pm.transpose();
        let svd = h.svd(true, true);
        let (Some(u), Some(vt)) = (svd.u, svd.v_t) else { return false };
        let rot = u * vt;
        let fitted = &rot * pm;
        return (fitted - qs).column_iter().all(|c| c.norm() <= tol);
    }
    for cand in 0..qm.ncols() {
        if images.contains(&cand) {
            continue;
        }
        let qc = qm.column(cand);
        let fits = (qc.dot(&qc) - g[(k, k)]).abs() <= scale
            && images.iter().enumerate().all(|(j, &img)| (qc.dot(&qm.column(img)) - g[(k, j)]).abs() <= scale);
        if fits {
            images.push(cand);
            if approx_search(g, qm, pm, coords, tol, images) {
                return true;
            }
            images.pop();
        }
    }
    false
}

/// Greedy bijection of columns of `a` onto nearby columns of `b`.
fn match_columns(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Option<Vec<usize>> {
    let mut used = vec![false; b.ncols()];
    let mut out = Vec::with_capacity(a.ncols());
    for col in a.column_iter() {
        let col: DVector<f64> = col.into();
        let (best, dist) = (0..b.ncols())
            .filter(|&j| !used[j])
            .map(|j| (j, (b.column(j) - &col).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if dist > tol {
            return None;
        }
        used[best] = true;
        out.push(best);
    }
    Some(out)
}
