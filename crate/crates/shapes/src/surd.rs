//! Exact arithmetic in a real quadratic field Q(√d).
//!
//! Regular 2n-gons for n ∈ {2, 3, 4, 6} and the dodecahedron have coordinates
//! in such fields, so squared distances between their samples can be compared
//! without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use gromon_core::scalar::{qi, rational_to_f64, Rational};
use num_traits::Zero;

/// a + b√d with rational a, b and squarefree d ≥ 2.
///
/// The representation is unique, so the derived equality and hash are the
/// field's. Values over different d never meet; mixing them panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: Rational,
    b: Rational,
    d: u32,
}

impl QuadSurd {
    pub fn new(a: Rational, b: Rational, d: u32) -> Self {
        assert!(d >= 2, "radicand must be at least 2");
        QuadSurd { a, b, d }
    }

    pub fn rational(a: Rational, d: u32) -> Self {
        QuadSurd::new(a, qi(0), d)
    }

    /// √d itself.
    pub fn root(d: u32) -> Self {
        QuadSurd::new(qi(0), qi(1), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic fields");
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd::new(self.a.clone(), -self.b.clone(), self.d)
    }

    /// The field norm a² − d b².
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn signum(&self) -> Ordering {
        let za = self.a.cmp(&qi(0));
        let zb = self.b.cmp(&qi(0));
        match (za, zb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (sa, sb) if sa == sb => sa,
            // opposite signs: the larger of a² and d b² wins
            (sa, _) => match self.norm().cmp(&qi(0)) {
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
                Ordering::Equal => Ordering::Equal,
            },
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * f64::from(self.d).sqrt()
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}√{}", self.a, self.b, self.d)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

/// The operations the exact geometry needs. Constants are produced from an
/// existing value because a surd's field is carried by the value.
pub trait ExactField: Clone + Eq + Hash + Ord + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn from_rational_like(&self, r: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// None on division by zero.
    fn div(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl ExactField for Rational {
    fn zero_like(&self) -> Self {
        qi(0)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl ExactField for QuadSurd {
    fn zero_like(&self) -> Self {
        QuadSurd::rational(qi(0), self.d)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        QuadSurd::rational(r.clone(), self.d)
    }
    fn add(&self, o: &Self) -> Self {
        self.check(o);
        QuadSurd::new(&self.a + &o.a, &self.b + &o.b, self.d)
    }
    fn sub(&self, o: &Self) -> Self {
        self.check(o);
        QuadSurd::new(&self.a - &o.a, &self.b - &o.b, self.d)
    }
    fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = Rational::from_integer(self.d.into());
        QuadSurd::new(&self.a * &o.a + d * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a, self.d)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.check(o);
        let n = o.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let p = self.mul(&o.conjugate());
        Some(QuadSurd::new(p.a / &n, p.b / n, self.d))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn to_f64(&self) -> f64 {
        QuadSurd::to_f64(self)
    }
}
