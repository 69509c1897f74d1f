//! Regular 2n-gons with isosceles triangles raised on some edges.
//!
//! The 2n-gon has apothem 1 and the outward normal of edge k points at angle
//! kπ/n. A raised edge is replaced by the two legs of an isosceles triangle
//! whose apex sits at (1 + height) times the edge midpoint. For n ∈ {2, 3, 4, 6}
//! every coordinate lies in Q(√2) or Q(√3) and the construction is exact.

use gromon_core::gromov::BlockPairing;
use gromon_core::scalar::{q, qi, rational_to_f64, Rational};
use num_traits::Signed;

use crate::error::{Result, ShapeError};
use crate::pair::DecoratedPair;
use crate::sample::sampled;
use crate::surd::{ExactField, QuadSurd};
use crate::symmetry::{class_pairing, cycle_graph, find_rigid_split};

/// Coordinates the construction can run in.
pub(crate) trait Coord: Clone {
    fn cadd(&self, o: &Self) -> Self;
    fn csub(&self, o: &Self) -> Self;
    fn cmul(&self, o: &Self) -> Self;
    fn cdiv(&self, o: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
}

impl Coord for f64 {
    fn cadd(&self, o: &Self) -> Self {
        self + o
    }
    fn csub(&self, o: &Self) -> Self {
        self - o
    }
    fn cmul(&self, o: &Self) -> Self {
        self * o
    }
    fn cdiv(&self, o: &Self) -> Self {
        self / o
    }
    fn scale(&self, r: &Rational) -> Self {
        self * rational_to_f64(r)
    }
}

impl Coord for QuadSurd {
    fn cadd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn csub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn cmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn cdiv(&self, o: &Self) -> Self {
        self.div(o).expect("nonzero divisor")
    }
    fn scale(&self, r: &Rational) -> Self {
        self.mul(&self.from_rational_like(r))
    }
}

pub(crate) type Pt<C> = [C; 2];

pub(crate) fn lerp<C: Coord>(a: &Pt<C>, b: &Pt<C>, f: &Rational) -> Pt<C> {
    [a[0].cadd(&b[0].csub(&a[0]).scale(f)), a[1].cadd(&b[1].csub(&a[1]).scale(f))]
}

/// cos(π/n) and sin(π/n) in a quadratic field, where that is possible.
pub fn exact_half_turn_fraction(n: usize) -> Option<(QuadSurd, QuadSurd)> {
    let s = |a: Rational, b: Rational, d: u32| QuadSurd::new(a, b, d);
    match n {
        2 => Some((s(qi(0), qi(0), 2), s(qi(1), qi(0), 2))),
        3 => Some((s(q(1, 2), qi(0), 3), s(qi(0), q(1, 2), 3))),
        4 => Some((s(qi(0), q(1, 2), 2), s(qi(0), q(1, 2), 2))),
        6 => Some((s(qi(0), q(1, 2), 3), s(q(1, 2), qi(0), 3))),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MallowsClarke {
    pub n: usize,
    pub height: Rational,
    /// One flag per edge of the 2n-gon.
    pub raised: Vec<bool>,
}

/// The pieces of the curve, one per polygon edge, each a chain of segments.
pub(crate) type Pieces<C> = Vec<Vec<(Pt<C>, Pt<C>)>>;

impl MallowsClarke {
    pub fn new(n: usize, height: Rational, raised: Vec<bool>) -> Result<Self> {
        if n < 2 {
            return Err(ShapeError::InvalidParameters(format!("a 2n-gon needs n >= 2, got {n}")));
        }
        if raised.len() != 2 * n {
            return Err(ShapeError::InvalidParameters(format!("{} edge flags for a {}-gon", raised.len(), 2 * n)));
        }
        if !height.is_positive() {
            return Err(ShapeError::InvalidParameters(format!("triangle height {height} must be positive")));
        }
        Ok(MallowsClarke { n, height, raised })
    }

    pub fn edges(&self) -> usize {
        2 * self.n
    }

    fn pieces_in<C: Coord>(&self, cos1: C, sin1: C, one: C) -> Pieces<C> {
        // u_k = (cos kπ/n, sin kπ/n) by repeated rotation
        let mut normals: Vec<Pt<C>> = vec![[one.clone(), one.csub(&one)]];
        for k in 1..self.edges() {
            let [x, y] = normals[k - 1].clone();
            normals.push([x.cmul(&cos1).csub(&y.cmul(&sin1)), x.cmul(&sin1).cadd(&y.cmul(&cos1))]);
        }
        // half an edge is tan(π/2n) = sin/(1 + cos) along the tangent
        let t = sin1.cdiv(&one.cadd(&cos1));
        let lift = qi(1) + &self.height;
        normals
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let half = [u[1].cmul(&t), u[0].cmul(&t)];
                let a = [u[0].cadd(&half[0]), u[1].csub(&half[1])];
                let b = [u[0].csub(&half[0]), u[1].cadd(&half[1])];
                if self.raised[k] {
                    let apex = [u[0].scale(&lift), u[1].scale(&lift)];
                    vec![(a, apex.clone()), (apex, b)]
                } else {
                    vec![(a, b)]
                }
            })
            .collect()
    }

    pub fn pieces_f64(&self) -> Pieces<f64> {
        let a = std::f64::consts::PI / self.n as f64;
        self.pieces_in(a.cos(), a.sin(), 1.0)
    }

    pub fn pieces_exact(&self) -> Option<Pieces<QuadSurd>> {
        let (c, s) = exact_half_turn_fraction(self.n)?;
        let one = c.from_rational_like(&qi(1));
        Some(self.pieces_in(c, s, one))
    }

    /// The closed vertex chain, counterclockwise.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        self.pieces_f64().into_iter().flat_map(|p| p.into_iter().map(|(a, _)| a)).collect()
    }

    /// `m` samples with equal counts per edge piece, placed at the midpoints of
    /// equal subdivisions of each segment so every piece is sampled
    /// symmetrically about its own mirror line.
    pub(crate) fn block_samples<C: Coord>(&self, pieces: &Pieces<C>, m: usize) -> Result<(Vec<Pt<C>>, Vec<usize>)> {
        let e = self.edges();
        let per_piece = m / e;
        if m % e != 0 || per_piece == 0 || (self.raised.iter().any(|&r| r) && per_piece % 2 != 0) {
            return Err(ShapeError::InvalidParameters(format!(
                "{m} samples cannot be split evenly over {e} pieces with an even count on each raised piece"
            )));
        }
        let mut pts = Vec::with_capacity(m);
        let mut labels = Vec::with_capacity(m);
        for (k, piece) in pieces.iter().enumerate() {
            let per_seg = per_piece / piece.len();
            for (a, b) in piece {
                for j in 0..per_seg {
                    pts.push(lerp(a, b, &q(2 * j as i64 + 1, 2 * per_seg as i64)));
                    labels.push(k);
                }
            }
        }
        Ok((pts, labels))
    }
}

/// Named edges of the octagon pair: triangles T1..T4 and straight edges S1..S4,
/// with the second curve trading S1 and T1.
const OCTAGON_X: [(&str, usize); 8] = [("T3", 0), ("S1", 1), ("S2", 2), ("S3", 3), ("T4", 4), ("T1", 5), ("S4", 6), ("T2", 7)];
const OCTAGON_Y: [(&str, usize); 8] = [("T3", 0), ("T1", 1), ("S2", 2), ("S3", 3), ("T4", 4), ("S1", 5), ("S4", 6), ("T2", 7)];

/// Block pairs that are not matched by name; every other pair is.
const OCTAGON_SWAPS: [(&str, &str, &str, &str); 12] = [
    ("S1", "S2", "S1", "S4"),
    ("S1", "S3", "S1", "S3"),
    ("S1", "S4", "S1", "S2"),
    ("S1", "T2", "S1", "T2"),
    ("S1", "T3", "S1", "T4"),
    ("S1", "T4", "S1", "T3"),
    ("T1", "T2", "T1", "T2"),
    ("T1", "T3", "T1", "T4"),
    ("T1", "T4", "T1", "T3"),
    ("T1", "S2", "T1", "S4"),
    ("T1", "S3", "T1", "S3"),
    ("T1", "S4", "T1", "S2"),
];

fn octagon_index(table: &[(&str, usize); 8], name: &str) -> usize {
    table.iter().find(|(n, _)| *n == name).map(|&(_, k)| k).expect("known edge name")
}

/// The octagon pair with four raised triangles each and its block pairing.
pub fn mallows_clarke_octagon(height: Rational) -> Result<(MallowsClarke, MallowsClarke, BlockPairing)> {
    let flags = |t: &[(&str, usize); 8]| {
        let mut f = vec![false; 8];
        for (name, k) in t {
            f[*k] = name.starts_with('T');
        }
        f
    };
    let x = MallowsClarke::new(4, height.clone(), flags(&OCTAGON_X))?;
    let y = MallowsClarke::new(4, height, flags(&OCTAGON_Y))?;
    let mut pairs = Vec::with_capacity(64);
    for (a, i) in OCTAGON_X {
        for (b, j) in OCTAGON_X {
            let (c, d) = OCTAGON_SWAPS
                .iter()
                .find_map(|&(p, q, r, s)| match (p == a && q == b, p == b && q == a) {
                    (true, _) => Some((r, s)),
                    (_, true) => Some((s, r)),
                    _ => None,
                })
                .unwrap_or((a, b));
            pairs.push((i, j, octagon_index(&OCTAGON_Y, c), octagon_index(&OCTAGON_Y, d)));
        }
    }
    Ok((x, y, BlockPairing { pairs }))
}

/// A 2n-gon pair raising complementary halves of the edges, chosen so that no
/// symmetry of the 2n-gon swaps the halves, with a pairing by edge separation.
pub fn mallows_clarke_pair(n: usize, height: Rational) -> Result<(MallowsClarke, MallowsClarke, BlockPairing)> {
    let adj = cycle_graph(2 * n);
    let a = find_rigid_split(&adj)?;
    let b: Vec<bool> = a.iter().map(|f| !f).collect();
    let pairing = class_pairing(&adj, &a, &b)?;
    Ok((MallowsClarke::new(n, height.clone(), a)?, MallowsClarke::new(n, height, b)?, pairing))
}

/// Samples both curves block by block with `m` points each.
pub fn sample_mallows_clarke_pair(x: &MallowsClarke, y: &MallowsClarke, pairing: BlockPairing, m: usize) -> Result<DecoratedPair> {
    if x.n != y.n {
        return Err(ShapeError::InvalidParameters("the curves are built on different polygons".into()));
    }
    let to_vecs = |pts: Vec<Pt<f64>>| pts.into_iter().map(|p| p.to_vec()).collect::<Vec<_>>();
    let (px, labels) = x.block_samples(&x.pieces_f64(), m)?;
    let (py, _) = y.block_samples(&y.pieces_f64(), m)?;
    let exact = match (x.pieces_exact(), y.pieces_exact()) {
        (Some(ex), Some(ey)) => {
            let (ex, _) = x.block_samples(&ex, m)?;
            let (ey, _) = y.block_samples(&ey, m)?;
            let v = |pts: Vec<Pt<QuadSurd>>| pts.into_iter().map(|p| p.to_vec()).collect::<Vec<_>>();
            Some((v(ex), v(ey)))
        }
        _ => None,
    };
    let describe = |c: &MallowsClarke| format!("mallows_clarke n={} height={} raised={:?}", c.n, c.height, c.raised);
    let sx = sampled(to_vecs(px), describe(x), "block-symmetric")?;
    let sy = sampled(to_vecs(py), describe(y), "block-symmetric")?;
    Ok(DecoratedPair { x: sx, y: sy, exact, labels, raised_x: x.raised.clone(), raised_y: y.raised.clone(), pairing })
}
