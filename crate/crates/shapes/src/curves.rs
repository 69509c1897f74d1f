//! Plane curves as mm-spaces with extrinsic distance, sampled at equal measure.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, ShapeError};
use crate::polygon::MallowsClarke;
use crate::sample::{euclidean, sampled, SampledSpace};

/// Relative accuracy of arclength integrals.
pub const ARCLENGTH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum PlaneCurve {
    /// The unit circle.
    Circle,
    /// Semi-axes a ≥ b > 0.
    Ellipse { a: f64, b: f64 },
    /// The unit circle carrying density (1 + A sin(ns)) / 2π.
    BumpyCircle { amplitude: f64, freq: u32 },
    /// A simple closed polygon through the listed vertices.
    Polygon(Vec<[f64; 2]>),
    MallowsClarke(MallowsClarke),
}

impl PlaneCurve {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ShapeError::InvalidParameters(m));
        match self {
            PlaneCurve::Circle | PlaneCurve::MallowsClarke(_) => Ok(()),
            PlaneCurve::Ellipse { a, b } => {
                if !(a.is_finite() && b.is_finite() && *b > 0.0 && a >= b) {
                    return bad(format!("ellipse needs a >= b > 0, got a={a}, b={b}"));
                }
                Ok(())
            }
            PlaneCurve::BumpyCircle { amplitude, freq } => {
                if !(0.0..1.0).contains(amplitude) || *freq == 0 {
                    return bad(format!("bumpy circle needs 0 <= A < 1 and n >= 1, got A={amplitude}, n={freq}"));
                }
                Ok(())
            }
            PlaneCurve::Polygon(v) => {
                if v.len() < 3 {
                    return bad(format!("a polygon needs 3 vertices, got {}", v.len()));
                }
                if v.iter().flatten().any(|c| !c.is_finite()) {
                    return bad("polygon vertices must be finite".into());
                }
                if !polygon_is_simple(v) {
                    return bad("polygon is not simple".into());
                }
                Ok(())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            PlaneCurve::Circle => "circle".into(),
            PlaneCurve::Ellipse { a, b } => format!("ellipse a={a} b={b}"),
            PlaneCurve::BumpyCircle { amplitude, freq } => format!("bumpy_circle A={amplitude} n={freq}"),
            PlaneCurve::Polygon(v) => format!("polygon {} vertices", v.len()),
            PlaneCurve::MallowsClarke(c) => format!("mallows_clarke n={} height={}", c.n, c.height),
        }
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// No two non-adjacent edges meet, no edge is degenerate.
fn polygon_is_simple(v: &[[f64; 2]]) -> bool {
    let n = v.len();
    if (0..n).any(|i| v[i] == v[(i + 1) % n]) {
        return false;
    }
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// The point of a curve at a given fraction of its measure, found through
/// a precomputed table where no closed form exists.
#[derive(Clone, Debug)]
pub struct CurveMeasure {
    curve: PlaneCurve,
    /// Cumulative lengths at uniform parameter knots (ellipse) or at the
    /// polygon vertices.
    table: Vec<f64>,
    vertices: Vec<[f64; 2]>,
}

const ELLIPSE_KNOTS: usize = 512;

fn ellipse_speed(a: f64, b: f64, t: f64) -> f64 {
    (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
}

fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, scale: f64) -> f64 {
    quadrature::integrate(f, lo, hi, ARCLENGTH_TOL * scale.max(f64::MIN_POSITIVE)).integral
}

/// Perimeter of the ellipse with semi-axes a, b by adaptive quadrature.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let quarter = integrate(|t| ellipse_speed(a, b, t), 0.0, PI / 2.0, a);
    4.0 * quarter
}

impl CurveMeasure {
    pub fn new(curve: &PlaneCurve) -> Result<Self> {
        curve.validate()?;
        let mut table = Vec::new();
        let mut vertices = Vec::new();
        match curve {
            PlaneCurve::Ellipse { a, b } => {
                let h = 2.0 * PI / ELLIPSE_KNOTS as f64;
                table.push(0.0);
                for k in 0..ELLIPSE_KNOTS {
                    let piece = integrate(|t| ellipse_speed(*a, *b, t), k as f64 * h, (k + 1) as f64 * h, a * h);
                    table.push(table[k] + piece);
                }
            }
            PlaneCurve::Polygon(v) => vertices = v.clone(),
            PlaneCurve::MallowsClarke(c) => vertices = c.vertices(),
            _ => {}
        }
        if !vertices.is_empty() {
            table.push(0.0);
            for k in 0..vertices.len() {
                let next = table[k] + euclidean(&vertices[k], &vertices[(k + 1) % vertices.len()]);
                table.push(next);
            }
        }
        Ok(CurveMeasure { curve: curve.clone(), table, vertices })
    }

    /// Total length (2π for both circles).
    pub fn length(&self) -> f64 {
        match self.curve {
            PlaneCurve::Circle | PlaneCurve::BumpyCircle { .. } => 2.0 * PI,
            _ => *self.table.last().expect("table is filled"),
        }
    }

    /// The point at measure fraction u ∈ [0, 1).
    pub fn point(&self, u: f64) -> [f64; 2] {
        let u = u.rem_euclid(1.0);
        match &self.curve {
            PlaneCurve::Circle => {
                let t = 2.0 * PI * u;
                [t.cos(), t.sin()]
            }
            PlaneCurve::BumpyCircle { amplitude, freq } => {
                let t = bumpy_inverse_cdf(*amplitude, *freq, u);
                [t.cos(), t.sin()]
            }
            PlaneCurve::Ellipse { a, b } => {
                let t = self.ellipse_parameter(*a, *b, u * self.length());
                [a * t.cos(), b * t.sin()]
            }
            PlaneCurve::Polygon(_) | PlaneCurve::MallowsClarke(_) => {
                let s = u * self.length();
                let k = self.table.partition_point(|&c| c <= s).saturating_sub(1).min(self.vertices.len() - 1);
                let (p, q) = (self.vertices[k], self.vertices[(k + 1) % self.vertices.len()]);
                let f = (s - self.table[k]) / (self.table[k + 1] - self.table[k]);
                [p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1])]
            }
        }
    }

    /// Parameter t with arclength s from t = 0, by Newton from the knot below.
    fn ellipse_parameter(&self, a: f64, b: f64, s: f64) -> f64 {
        let h = 2.0 * PI / ELLIPSE_KNOTS as f64;
        let k = self.table.partition_point(|&c| c <= s).saturating_sub(1).min(ELLIPSE_KNOTS - 1);
        let t0 = k as f64 * h;
        let mut t = t0 + h * (s - self.table[k]) / (self.table[k + 1] - self.table[k]);
        for _ in 0..20 {
            let err = self.table[k] + integrate(|x| ellipse_speed(a, b, x), t0, t, a * h) - s;
            let step = err / ellipse_speed(a, b, t);
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        t
    }
}

/// Angle s with F(s) = u for F(s) = (s + A(1 − cos ns)/n) / 2π.
pub fn bumpy_inverse_cdf(amplitude: f64, freq: u32, u: f64) -> f64 {
    let n = f64::from(freq);
    let target = 2.0 * PI * u;
    let f = |s: f64| s + amplitude * (1.0 - (n * s).cos()) / n - target;
    let (mut lo, mut hi) = (0.0, 2.0 * PI);
    let mut s = target;
    for _ in 0..100 {
        let v = f(s);
        if v.abs() < 1e-15 {
            break;
        }
        if v > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let next = s - v / (1.0 + amplitude * (n * s).sin());
        s = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    s
}

/// `m` points at measure fractions (k + ½)/m; Mallows-Clarke curves use their
/// block-symmetric sampling instead.
pub fn sample_curve(curve: &PlaneCurve, m: usize) -> Result<SampledSpace<f64>> {
    if m < 3 {
        return Err(ShapeError::InvalidParameters(format!("need at least 3 samples, got {m}")));
    }
    if let PlaneCurve::MallowsClarke(c) = curve {
        let (pts, _) = c.block_samples(&c.pieces_f64(), m)?;
        return sampled(pts.into_iter().map(|p| p.to_vec()).collect(), curve.describe(), "block-symmetric");
    }
    let meas = CurveMeasure::new(curve)?;
    let pts = (0..m).map(|k| meas.point((k as f64 + 0.5) / m as f64).to_vec()).collect();
    sampled(pts, curve.describe(), "equal-measure")
}

/// H(r) = (2/π) arcsin(r/2) for the unit circle, r ∈ [0, 2].
pub fn circle_chordal_cdf(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else if r >= 2.0 {
        1.0
    } else {
        2.0 / PI * (r / 2.0).asin()
    }
}

/// Monte-Carlo global distribution: the fraction of `pairs` independent pairs
/// within distance r, for each requested radius.
pub fn monte_carlo_h(curve: &PlaneCurve, pairs: usize, seed: u64, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    if pairs == 0 {
        return Err(ShapeError::InvalidParameters("need at least one pair".into()));
    }
    let meas = CurveMeasure::new(curve)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dists: Vec<f64> = (0..pairs)
        .map(|_| {
            let a = meas.point(rng.random::<f64>());
            let b = meas.point(rng.random::<f64>());
            euclidean(&a, &b)
        })
        .collect();
    dists.sort_by(f64::total_cmp);
    Ok(radii.iter().map(|&r| (r, dists.partition_point(|&d| d <= r) as f64 / pairs as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_four_points_form_a_square() {
        let s = sample_curve(&PlaneCurve::Circle, 4).unwrap();
        let x = &s.space;
        for i in 0..4 {
            assert!((x.d(i, (i + 1) % 4) - 2f64.sqrt()).abs() < 1e-12);
            assert!((x.d(i, (i + 2) % 4) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_perimeter_of_a_circle() {
        assert!((ellipse_perimeter(1.0, 1.0) - 2.0 * PI).abs() < 1e-12);
        // Ramanujan's second approximation is accurate to ~1e-10 at this eccentricity
        let (a, b) = (2.0f64, 1.0f64);
        let h = ((a - b) / (a + b)).powi(2);
        let ram = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((ellipse_perimeter(a, b) - ram).abs() < 1e-8);
    }

    #[test]
    fn ellipse_samples_are_equally_spaced_in_arclength() {
        let c = PlaneCurve::Ellipse { a: 2.0, b: 1.0 };
        let m = CurveMeasure::new(&c).unwrap();
        // the point at half the length is the antipode of the start
        let p = m.point(0.5);
        assert!((p[0] + 2.0).abs() < 1e-10 && p[1].abs() < 1e-10);
        let q = m.point(0.25);
        assert!(q[0].abs() < 1e-10 && (q[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bumpy_inverse_is_an_inverse() {
        for &u in &[0.0, 0.1, 0.37, 0.5, 0.93] {
            let s = bumpy_inverse_cdf(0.5, 3, u);
            let f = (s + 0.5 * (1.0 - (3.0 * s).cos()) / 3.0) / (2.0 * PI);
            assert!((f - u).abs() < 1e-13, "{u} {s} {f}");
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(sample_curve(&PlaneCurve::Ellipse { a: 1.0, b: 2.0 }, 10).is_err());
        assert!(sample_curve(&PlaneCurve::BumpyCircle { amplitude: 1.0, freq: 2 }, 10).is_err());
        assert!(sample_curve(&PlaneCurve::Circle, 2).is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(sample_curve(&PlaneCurve::Polygon(bowtie), 8).is_err());
    }
}
