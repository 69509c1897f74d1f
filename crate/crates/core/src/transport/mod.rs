//! One-dimensional transport on step CDFs, Monge assignment and the Kantorovich LP.

mod assignment;
mod cdf;
mod network;

pub use assignment::{hungarian, solve_assignment, Assignment, CostMatrix, DEFAULT_ASSIGNMENT_GUARD};
pub use cdf::{w1_cdf, wp_quantile, Atoms, StepCDF};
pub use network::{solve_kantorovich, transport_simplex, FlowNum};

use crate::error::Result;
use crate::scalar::Scalar;

/// Generalized inverse inf{r : F(r) > u}.
pub fn quantile<S: Scalar>(f: &StepCDF<S>, u: &S) -> Result<S> {
    f.quantile(u)
}
