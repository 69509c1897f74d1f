//! Low-discrepancy samples of the unit spheres S¹ ⊂ R² and S² ⊂ R³.
//!
//! S¹ gets m equally spaced angles with a seeded phase. S² gets the Fibonacci
//! lattice (equal-area bands in z, golden-angle longitudes) under a seeded
//! uniformly random rotation.

use std::f64::consts::PI;

use nalgebra::{Matrix3, UnitQuaternion, Vector3, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, ShapeError};
use crate::sample::{euclidean, sampled, SampledSpace};

fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    // uniform unit quaternion from three uniforms
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let q = Quaternion::new(a * (2.0 * PI * u2).sin(), a * (2.0 * PI * u2).cos(), b * (2.0 * PI * u3).sin(), b * (2.0 * PI * u3).cos());
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

/// The sample coordinates alone, for sizes beyond a dense distance matrix.
pub fn sphere_points(d: usize, m: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if m < 10 {
        return Err(ShapeError::InvalidParameters(format!("need at least 10 samples, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match d {
        1 => {
            let phase: f64 = rng.random();
            Ok((0..m)
                .map(|k| {
                    let t = 2.0 * PI * (k as f64 + phase) / m as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect())
        }
        2 => {
            let rot = random_rotation(&mut rng);
            let golden = PI * (3.0 - 5f64.sqrt());
            Ok((0..m)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / m as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    let p = rot * Vector3::new(rho * t.cos(), rho * t.sin(), z);
                    vec![p.x, p.y, p.z]
                })
                .collect())
        }
        _ => Err(ShapeError::InvalidParameters(format!("sphere dimension must be 1 or 2, got {d}"))),
    }
}

pub fn sample_sphere_surface(d: usize, m: usize, seed: u64) -> Result<SampledSpace<f64>> {
    let pts = sphere_points(d, m, seed)?;
    sampled(pts, format!("sphere S^{d} seed={seed}"), if d == 1 { "equal-angle" } else { "fibonacci" })
}

/// Fraction of the points within distance r of point `centre`, for each r.
pub fn local_cdf(points: &[Vec<f64>], centre: usize, radii: &[f64]) -> Vec<f64> {
    let mut d: Vec<f64> = points.iter().map(|p| euclidean(p, &points[centre])).collect();
    d.sort_by(f64::total_cmp);
    radii.iter().map(|&r| d.partition_point(|&x| x <= r) as f64 / points.len() as f64).collect()
}

/// Normalized area of the chordal cap of radius r on S²: r²/4 for r ≤ 2.
pub fn sphere_cap_fraction(r: f64) -> f64 {
    (r * r / 4.0).clamp(0.0, 1.0)
}
