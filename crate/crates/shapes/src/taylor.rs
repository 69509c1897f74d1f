//! Least-squares fits of small-r power series to distance distributions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, ShapeError};

/// Fits whose scaled design matrix is worse conditioned than this are refused.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorFit {
    pub degrees: Vec<u32>,
    pub coeffs: Vec<f64>,
    /// One standard error per coefficient, from the residual variance.
    pub std_errors: Vec<f64>,
    /// Root mean square residual.
    pub residual: f64,
    pub points: usize,
}

impl TaylorFit {
    pub fn coeff(&self, degree: u32) -> Option<f64> {
        self.degrees.iter().position(|&d| d == degree).map(|i| self.coeffs[i])
    }

    pub fn std_error(&self, degree: u32) -> Option<f64> {
        self.degrees.iter().position(|&d| d == degree).map(|i| self.std_errors[i])
    }
}

/// Fits Σ c_k r^k over the requested degrees to the samples with 0 < r ≤ window.
pub fn fit_taylor_coeffs(data: &[(f64, f64)], degrees: &[u32], window: f64) -> Result<TaylorFit> {
    if degrees.len() < 2 {
        return Err(ShapeError::InvalidParameters(format!("need at least two degrees, got {}", degrees.len())));
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != degrees.len() || degrees.contains(&0) {
        return Err(ShapeError::InvalidParameters("degrees must be distinct and positive".into()));
    }
    let rows: Vec<(f64, f64)> = data.iter().copied().filter(|&(r, v)| r > 0.0 && r <= window && v.is_finite()).collect();
    let (n, k) = (rows.len(), degrees.len());
    if n <= k {
        return Err(ShapeError::IllConditioned(format!("{n} samples in the window for {k} coefficients")));
    }
    // columns r^d / window^d keep the matrix well scaled
    let x = DMatrix::from_fn(n, k, |i, j| (rows[i].0 / window).powi(degrees[j] as i32));
    let y = DVector::from_iterator(n, rows.iter().map(|r| r.1));
    let svd = x.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if smin <= 0.0 || smax / smin > MAX_CONDITION {
        return Err(ShapeError::IllConditioned(format!("condition number {:.3e}", smax / smin)));
    }
    let beta = svd.solve(&y, 0.0).map_err(|e| ShapeError::IllConditioned(e.to_string()))?;
    let resid = &y - &x * &beta;
    let rss = resid.norm_squared();
    let sigma2 = rss / (n - k) as f64;
    // (XᵀX)⁻¹ = V Σ⁻² Vᵀ
    let vt = svd.v_t.expect("requested");
    let inv_sq = DMatrix::from_diagonal(&svd.singular_values.map(|s| 1.0 / (s * s)));
    let cov = vt.transpose() * inv_sq * &vt * sigma2;
    let unscale = |j: usize| window.powi(degrees[j] as i32);
    Ok(TaylorFit {
        degrees: degrees.to_vec(),
        coeffs: (0..k).map(|j| beta[j] / unscale(j)).collect(),
        std_errors: (0..k).map(|j| cov[(j, j)].max(0.0).sqrt() / unscale(j)).collect(),
        residual: (rss / n as f64).sqrt(),
        points: n,
    })
}
