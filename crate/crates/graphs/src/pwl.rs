//! Continuous piecewise-linear functions on `[0, ∞)`, constant after the last
//! breakpoint. Stored canonically (no collinear interior breakpoints, no
//! trailing flat piece), so structural equality is functional equality.

use gromon_core::scalar::{parse_rational, qi, Rational};
use num_traits::Zero;

use crate::error::{GraphError, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pwl {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl Pwl {
    pub fn zero() -> Self {
        Pwl { xs: vec![qi(0)], ys: vec![qi(0)] }
    }

    /// Builds from sorted points starting at `x = 0`.
    pub fn from_points(xs: Vec<Rational>, ys: Vec<Rational>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(!xs.is_empty() && xs[0].is_zero(), "first breakpoint must be 0");
        let mut out = Pwl { xs: Vec::with_capacity(xs.len()), ys: Vec::with_capacity(ys.len()) };
        for (x, y) in xs.into_iter().zip(ys) {
            if let Some(last) = out.xs.last() {
                assert!(x > *last, "breakpoints must increase");
            }
            let k = out.xs.len();
            if k >= 2 {
                let (x0, y0, x1, y1) = (&out.xs[k - 2], &out.ys[k - 2], &out.xs[k - 1], &out.ys[k - 1]);
                if (y1 - y0) * (&x - x1) == (&y - y1) * (x1 - x0) {
                    out.xs.pop();
                    out.ys.pop();
                }
            }
            out.xs.push(x);
            out.ys.push(y);
        }
        while out.xs.len() >= 2 && out.ys[out.ys.len() - 1] == out.ys[out.ys.len() - 2] {
            out.xs.pop();
            out.ys.pop();
        }
        out
    }

    /// Samples `f` at `0` and at every nonnegative candidate breakpoint. Exact
    /// whenever `f` is linear between consecutive candidates and constant after
    /// the largest.
    pub fn sample<I, F>(bps: I, f: F) -> Self
    where
        I: IntoIterator<Item = Rational>,
        F: Fn(&Rational) -> Rational,
    {
        let zero = qi(0);
        let mut xs: Vec<Rational> = bps.into_iter().filter(|x| *x >= zero).collect();
        xs.push(qi(0));
        xs.sort();
        xs.dedup();
        let ys = xs.iter().map(&f).collect();
        Pwl::from_points(xs, ys)
    }

    /// `min(r, l)`.
    pub fn ramp(l: &Rational) -> Self {
        Pwl::from_points(vec![qi(0), l.clone()], vec![qi(0), l.clone()])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.xs
    }

    pub fn values(&self) -> &[Rational] {
        &self.ys
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        if *r <= self.xs[0] {
            return self.ys[0].clone();
        }
        match self.xs.binary_search(r) {
            Ok(i) => self.ys[i].clone(),
            Err(i) if i == self.xs.len() => self.ys[i - 1].clone(),
            Err(i) => {
                let (x0, x1, y0, y1) = (&self.xs[i - 1], &self.xs[i], &self.ys[i - 1], &self.ys[i]);
                y0 + (y1 - y0) * (r - x0) / (x1 - x0)
            }
        }
    }

    /// Slope of each piece; the piece after the last breakpoint has slope 0.
    pub fn slopes(&self) -> Vec<Rational> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (&y[1] - &y[0]) / (&x[1] - &x[0]))
            .collect()
    }

    /// Right derivative at 0.
    pub fn initial_slope(&self) -> Rational {
        self.slopes().into_iter().next().unwrap_or_else(|| qi(0))
    }

    /// The smallest `r >= 0` after which the slope is no longer `s`.
    pub fn first_slope_change(&self, s: &Rational) -> Option<Rational> {
        for (i, sl) in self.slopes().iter().enumerate() {
            if sl != s {
                return Some(self.xs[i].clone());
            }
        }
        if s.is_zero() {
            None
        } else {
            self.xs.last().cloned()
        }
    }

    /// Value after the last breakpoint.
    pub fn final_value(&self) -> &Rational {
        self.ys.last().unwrap()
    }

    pub fn add(&self, other: &Pwl) -> Pwl {
        Pwl::sample(self.xs.iter().chain(&other.xs).cloned(), |r| self.eval(r) + other.eval(r))
    }

    pub fn sub(&self, other: &Pwl) -> Pwl {
        Pwl::sample(self.xs.iter().chain(&other.xs).cloned(), |r| self.eval(r) - other.eval(r))
    }

    pub fn scale(&self, c: &Rational) -> Pwl {
        Pwl::from_points(self.xs.clone(), self.ys.iter().map(|y| y * c).collect())
    }

    /// `r ↦ f(r + a)` for `a >= 0`.
    pub fn advance(&self, a: &Rational) -> Pwl {
        Pwl::sample(self.xs.iter().map(|x| x - a), |r| self.eval(&(r + a)))
    }

    /// `r ↦ f(max(r − a, 0))` for `a >= 0`.
    pub fn delay(&self, a: &Rational) -> Pwl {
        Pwl::sample(self.xs.iter().map(|x| x + a), |r| self.eval(&(r - a)))
    }
}

/// A normalized volume-growth function: continuous, nondecreasing, `0` at `0`
/// and exactly `1` from the last breakpoint on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PwlCDF(Pwl);

impl PwlCDF {
    pub fn new(f: Pwl) -> Result<Self> {
        if !f.ys[0].is_zero() {
            return Err(GraphError::InvalidGraph("volume function must vanish at 0".into()));
        }
        if f.ys.windows(2).any(|w| w[1] < w[0]) {
            return Err(GraphError::InvalidGraph("volume function must be nondecreasing".into()));
        }
        if *f.final_value() != qi(1) {
            return Err(GraphError::InvalidGraph(format!("volume function ends at {}, not 1", f.final_value())));
        }
        Ok(PwlCDF(f))
    }

    pub fn pwl(&self) -> &Pwl {
        &self.0
    }

    pub fn breakpoints(&self) -> &[Rational] {
        self.0.breakpoints()
    }

    pub fn values(&self) -> &[Rational] {
        self.0.values()
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        self.0.eval(r)
    }

    pub fn initial_slope(&self) -> Rational {
        self.0.initial_slope()
    }

    /// Radius at which the whole graph is covered.
    pub fn cover_radius(&self) -> &Rational {
        self.0.xs.last().unwrap()
    }

    /// `breakpoint,value` rows with a header, rationals written exactly.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r", "h"]).unwrap();
        for (x, y) in self.0.xs.iter().zip(&self.0.ys) {
            w.write_record([x.to_string(), y.to_string()]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for rec in rd.records() {
            let rec = rec.map_err(|e| GraphError::Parse(e.to_string()))?;
            if rec.len() != 2 {
                return Err(GraphError::Parse("expected two columns".into()));
            }
            xs.push(parse_rational(&rec[0])?);
            ys.push(parse_rational(&rec[1])?);
        }
        if xs.is_empty() || !xs[0].is_zero() || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GraphError::Parse("breakpoints must start at 0 and increase".into()));
        }
        PwlCDF::new(Pwl::from_points(xs, ys))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gromon_core::scalar::q;

    #[test]
    fn collinear_points_are_merged() {
        let f = Pwl::from_points(vec![qi(0), qi(1), qi(2), qi(3)], vec![qi(0), qi(1), qi(2), qi(2)]);
        assert_eq!(f.breakpoints(), &[qi(0), qi(2)]);
        assert_eq!(f.eval(&q(1, 2)), q(1, 2));
        assert_eq!(f.eval(&qi(9)), qi(2));
    }

    #[test]
    fn shifts_and_sums() {
        let r = Pwl::ramp(&qi(2));
        assert_eq!(r.advance(&qi(1)).eval(&qi(0)), qi(1));
        assert_eq!(r.delay(&qi(1)).eval(&qi(2)), qi(1));
        assert_eq!(r.delay(&qi(1)).eval(&q(1, 2)), qi(0));
        let s = r.add(&r.delay(&qi(1)));
        assert_eq!(s.slopes(), vec![qi(1), qi(2), qi(1)]);
        assert_eq!(s.sub(&r), r.delay(&qi(1)));
        assert_eq!(r.first_slope_change(&qi(1)), Some(qi(2)));
    }

    #[test]
    fn csv_round_trip() {
        let f = PwlCDF::new(Pwl::from_points(vec![qi(0), q(1, 3), qi(1)], vec![qi(0), q(1, 2), qi(1)])).unwrap();
        let text = f.to_csv();
        assert!(text.contains("1/3,1/2"));
        assert_eq!(PwlCDF::from_csv(&text).unwrap(), f);
    }
}
