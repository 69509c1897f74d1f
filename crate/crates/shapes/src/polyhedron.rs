//! The dodecahedron with symmetric pyramids raised on half of its faces.
//!
//! Coordinates lie in Q(√5): the vertices are (±1, ±1, ±1) and the cyclic
//! permutations of (0, ±1/φ, ±φ). A raised face is replaced by the pyramid over
//! it whose apex is (1 + height) times the face centre.

use gromon_core::scalar::{q, qi, Rational};
use num_traits::Signed;

use crate::error::{Result, ShapeError};
use crate::pair::DecoratedPair;
use crate::sample::sampled;
use crate::surd::{ExactField, QuadSurd};
use crate::symmetry::{class_pairing, find_rigid_split};

type P3 = [QuadSurd; 3];

fn s5(a: Rational, b: Rational) -> QuadSurd {
    QuadSurd::new(a, b, 5)
}

fn dot(a: &P3, b: &P3) -> QuadSurd {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn sub(a: &P3, b: &P3) -> P3 {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

fn scale(a: &P3, r: &QuadSurd) -> P3 {
    [a[0].mul(r), a[1].mul(r), a[2].mul(r)]
}

fn combo(terms: &[(&P3, Rational)]) -> P3 {
    let z = s5(qi(0), qi(0));
    let mut out = [z.clone(), z.clone(), z];
    for (p, w) in terms {
        let w = s5(w.clone(), qi(0));
        for k in 0..3 {
            out[k] = out[k].add(&p[k].mul(&w));
        }
    }
    out
}

/// Vertices, and faces as cyclically ordered vertex indices.
#[derive(Clone, Debug)]
pub struct Dodecahedron {
    pub vertices: Vec<P3>,
    pub faces: Vec<[usize; 5]>,
}

impl Dodecahedron {
    pub fn new() -> Self {
        let phi = s5(q(1, 2), q(1, 2));
        let inv = s5(q(-1, 2), q(1, 2));
        let one = s5(qi(1), qi(0));
        let zero = s5(qi(0), qi(0));
        let neg = |x: &QuadSurd| zero.sub(x);
        let mut vertices: Vec<P3> = Vec::with_capacity(20);
        for sx in [1, -1] {
            for sy in [1, -1] {
                for sz in [1, -1] {
                    let c = |s: i32| if s > 0 { one.clone() } else { neg(&one) };
                    vertices.push([c(sx), c(sy), c(sz)]);
                }
            }
        }
        for sa in [1, -1] {
            for sb in [1, -1] {
                let a = if sa > 0 { inv.clone() } else { neg(&inv) };
                let b = if sb > 0 { phi.clone() } else { neg(&phi) };
                vertices.push([zero.clone(), a.clone(), b.clone()]);
                vertices.push([a.clone(), b.clone(), zero.clone()]);
                vertices.push([b, zero.clone(), a]);
            }
        }
        // face normals: the icosahedron vertices (0, ±φ, ±1) and cyclic shifts
        let mut normals: Vec<P3> = Vec::with_capacity(12);
        for sa in [1, -1] {
            for sb in [1, -1] {
                let a = if sa > 0 { phi.clone() } else { neg(&phi) };
                let b = if sb > 0 { one.clone() } else { neg(&one) };
                normals.push([zero.clone(), a.clone(), b.clone()]);
                normals.push([a.clone(), b.clone(), zero.clone()]);
                normals.push([b, zero.clone(), a]);
            }
        }
        let edge = vertices
            .iter()
            .flat_map(|a| vertices.iter().map(move |b| dot(&sub(a, b), &sub(a, b))))
            .filter(|d| !d.is_zero())
            .min()
            .expect("vertices are distinct");
        let faces = normals
            .iter()
            .map(|nv| {
                let top = vertices.iter().map(|v| dot(v, nv)).max().expect("nonempty");
                let members: Vec<usize> = (0..20).filter(|&i| dot(&vertices[i], nv) == top).collect();
                assert_eq!(members.len(), 5, "a face has five vertices");
                // walk the pentagon along its edges
                let mut cycle = vec![members[0]];
                while cycle.len() < 5 {
                    let last = *cycle.last().expect("nonempty");
                    let next = members
                        .iter()
                        .copied()
                        .find(|&m| !cycle.contains(&m) && dot(&sub(&vertices[m], &vertices[last]), &sub(&vertices[m], &vertices[last])) == edge)
                        .expect("pentagon edges");
                    cycle.push(next);
                }
                [cycle[0], cycle[1], cycle[2], cycle[3], cycle[4]]
            })
            .collect();
        Dodecahedron { vertices, faces }
    }

    /// Faces sharing an edge.
    pub fn face_adjacency(&self) -> Vec<Vec<bool>> {
        let f = &self.faces;
        (0..12)
            .map(|i| (0..12).map(|j| i != j && f[i].iter().filter(|v| f[j].contains(v)).count() == 2).collect())
            .collect()
    }

    pub fn centre(&self, face: usize) -> P3 {
        let terms: Vec<(&P3, Rational)> = self.faces[face].iter().map(|&v| (&self.vertices[v], q(1, 5))).collect();
        combo(&terms)
    }

    /// Samples of one face: a fan of five triangles from the centre (or apex),
    /// each sampled at the centroids of its k × k subdivision. The sample set
    /// is invariant under the symmetries of the face.
    fn face_samples(&self, face: usize, apex_lift: Option<&Rational>, k: usize) -> Vec<P3> {
        let c = self.centre(face);
        let top = match apex_lift {
            Some(h) => scale(&c, &s5(qi(1) + h, qi(0))),
            None => c,
        };
        let vs = &self.faces[face];
        let kk = k as i64;
        let mut out = Vec::with_capacity(5 * k * k);
        for t in 0..5 {
            let (a, b) = (&self.vertices[vs[t]], &self.vertices[vs[(t + 1) % 5]]);
            for (shift, total) in [(1i64, kk - 1), (2, kk - 2)] {
                if total < 0 {
                    continue;
                }
                for i in 0..=total {
                    for j in 0..=(total - i) {
                        let l = total - i - j;
                        let w = |x: i64| q(3 * x + shift, 3 * kk);
                        out.push(combo(&[(&top, w(i)), (a, w(j)), (b, w(l))]));
                    }
                }
            }
        }
        out
    }
}

impl Default for Dodecahedron {
    fn default() -> Self {
        Dodecahedron::new()
    }
}

/// Pyramids of the given height on complementary halves of the faces, the
/// halves chosen so that no symmetry of the dodecahedron swaps them. Both
/// surfaces get `m = 60 k²` samples, 5k² per face.
pub fn dodecahedron_bump_pair(height: &Rational, m: usize) -> Result<DecoratedPair> {
    if height.is_negative() {
        return Err(ShapeError::InvalidParameters(format!("pyramid height {height} must be nonnegative")));
    }
    let k = (1..=m).take_while(|k| 60 * k * k <= m).last().unwrap_or(0);
    if k == 0 || 60 * k * k != m {
        return Err(ShapeError::InvalidParameters(format!("{m} samples is not 60 k² for an integer k")));
    }
    let d = Dodecahedron::new();
    let adj = d.face_adjacency();
    let a = find_rigid_split(&adj)?;
    let b: Vec<bool> = a.iter().map(|f| !f).collect();
    let pairing = class_pairing(&adj, &a, &b)?;
    let build = |raised: &[bool]| -> Vec<Vec<QuadSurd>> {
        (0..12).flat_map(|f| d.face_samples(f, raised[f].then_some(height), k)).map(|p| p.to_vec()).collect()
    };
    let (ex, ey) = (build(&a), build(&b));
    let labels: Vec<usize> = (0..12).flat_map(|f| std::iter::repeat_n(f, 5 * k * k)).collect();
    let float = |pts: &[Vec<QuadSurd>]| pts.iter().map(|p| p.iter().map(QuadSurd::to_f64).collect()).collect::<Vec<Vec<f64>>>();
    let describe = |r: &[bool]| format!("dodecahedron pyramids height={height} raised={r:?}");
    Ok(DecoratedPair {
        x: sampled(float(&ex), describe(&a), "face-symmetric")?,
        y: sampled(float(&ey), describe(&b), "face-symmetric")?,
        exact: Some((ex, ey)),
        labels,
        raised_x: a,
        raised_y: b,
        pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::automorphisms;

    #[test]
    fn combinatorics() {
        let d = Dodecahedron::new();
        let adj = d.face_adjacency();
        assert!(adj.iter().all(|r| r.iter().filter(|&&x| x).count() == 5));
        assert_eq!(automorphisms(&adj).len(), 120);
        // every vertex lies on exactly three faces
        for v in 0..20 {
            assert_eq!(d.faces.iter().filter(|f| f.contains(&v)).count(), 3);
        }
    }

    #[test]
    fn zero_height_gives_identical_samples() {
        let p = dodecahedron_bump_pair(&qi(0), 60).unwrap();
        let (ex, ey) = p.exact.unwrap();
        assert_eq!(ex, ey);
        assert!(dodecahedron_bump_pair(&qi(-1), 60).is_err());
        assert!(dodecahedron_bump_pair(&qi(1), 100).is_err());
    }
}
