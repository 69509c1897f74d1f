//! Finite mm-spaces sampled from curves, spheres and polyhedra, the
//! counterexample pairs with equal distance distributions, exact congruence
//! tests, and Taylor fits of small-radius distance distributions.

pub mod bloom;
pub mod congruence;
pub mod curves;
pub mod error;
pub mod pair;
pub mod polygon;
pub mod polyhedron;
pub mod sample;
pub mod sphere;
pub mod surd;
pub mod symmetry;
pub mod taylor;

pub use bloom::bloom_point_clouds;
pub use congruence::{congruent_approx, congruent_exact, congruent_line};
pub use curves::{circle_chordal_cdf, ellipse_perimeter, monte_carlo_h, sample_curve, CurveMeasure, PlaneCurve};
pub use error::{Result, ShapeError};
pub use pair::{DecoratedPair, PairReport};
pub use polygon::{mallows_clarke_octagon, mallows_clarke_pair, sample_mallows_clarke_pair, MallowsClarke};
pub use polyhedron::{dodecahedron_bump_pair, Dodecahedron};
pub use sample::{euclidean_space, ordinal_spaces, Provenance, SampledSpace};
pub use sphere::{local_cdf, sample_sphere_surface, sphere_cap_fraction, sphere_points};
pub use surd::{ExactField, QuadSurd};
pub use taylor::{fit_taylor_coeffs, TaylorFit};
