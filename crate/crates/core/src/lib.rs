//! Finite metric measure spaces and the Gromov-Monge distance.
//!
//! Everything is generic over [`Scalar`]: exact [`Rational`] arithmetic or
//! tolerance-compared `f64`.

pub mod error;
pub mod gromov;
pub mod invariants;
pub mod json;
pub mod scalar;
pub mod space;
pub mod transport;

pub use error::{Error, Result};
pub use gromov::{gm_exact, gm_heuristic, GMResult, Method};
pub use scalar::{q, qi, Extended, PExponent, PValue, Rational, Scalar, ScalarKind};
pub use space::{Coupling, FiniteMMSpace, MeasurePreservingMap, SpaceOptions};
