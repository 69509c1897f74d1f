use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{PExponent, Scalar};

/// A finite measure on [0, ∞) as sorted atoms `(location, mass)` with distinct locations.
#[derive(Clone, Debug, PartialEq)]
pub struct Atoms<S> {
    atoms: Vec<(S, S)>,
}

impl<S: Scalar> Atoms<S> {
    /// Sorts and merges atoms at exactly equal locations. Zero-mass atoms are dropped.
    pub fn from_unsorted(mut raw: Vec<(S, S)>) -> Self {
        raw.sort_by(|a, b| a.0.cmp_total(&b.0));
        let mut atoms: Vec<(S, S)> = Vec::with_capacity(raw.len());
        for (x, m) in raw {
            if m.is_zero() {
                continue;
            }
            match atoms.last_mut() {
                Some(last) if last.0 == x => last.1 = last.1.clone() + m,
                _ => atoms.push((x, m)),
            }
        }
        Atoms { atoms }
    }

    pub fn atoms(&self) -> &[(S, S)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> S {
        self.atoms.iter().fold(S::zero(), |a, (_, m)| a + m.clone())
    }

    /// Equality up to `tol` in both location and mass. Float atoms closer than
    /// `tol` to the first atom of their run are merged first, so rounding that
    /// splits one location in two does not matter.
    pub fn eq_tol(&self, other: &Self, tol: f64) -> bool {
        let (a, b) = (cluster(&self.atoms, tol), cluster(&other.atoms, tol));
        a.len() == b.len() && a.iter().zip(&b).all(|(a, b)| a.0.eq_tol(&b.0, tol) && a.1.eq_tol(&b.1, tol))
    }
}

fn cluster<S: Scalar>(atoms: &[(S, S)], tol: f64) -> Vec<(S, S)> {
    let mut out: Vec<(S, S)> = Vec::with_capacity(atoms.len());
    for (x, m) in atoms {
        match out.last_mut() {
            Some(last) if last.0.eq_tol(x, tol) => last.1 = last.1.clone() + m.clone(),
            _ => out.push((x.clone(), m.clone())),
        }
    }
    out
}

/// Right-continuous nondecreasing step CDF with terminal value 1.
/// `values[k]` is F(r) for r in [breakpoints[k], breakpoints[k+1]).
#[derive(Clone, Debug, PartialEq)]
pub struct StepCDF<S> {
    breakpoints: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> StepCDF<S> {
    pub fn new(breakpoints: Vec<S>, values: Vec<S>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidInput("step CDF needs matching nonempty arrays".into()));
        }
        let zero = S::zero();
        if breakpoints[0].cmp_total(&zero) == Ordering::Less {
            return Err(Error::InvalidInput("breakpoints must be nonnegative".into()));
        }
        for k in 1..breakpoints.len() {
            if breakpoints[k - 1].cmp_total(&breakpoints[k]) != Ordering::Less {
                return Err(Error::InvalidInput("breakpoints must increase strictly".into()));
            }
            if values[k - 1].cmp_total(&values[k]) == Ordering::Greater {
                return Err(Error::InvalidInput("values must be nondecreasing".into()));
            }
        }
        if values[0].cmp_total(&zero) != Ordering::Greater {
            return Err(Error::InvalidInput("first step must be positive".into()));
        }
        if values.last() != Some(&S::one()) {
            return Err(Error::InvalidInput("terminal value must be exactly 1".into()));
        }
        Ok(StepCDF { breakpoints, values })
    }

    /// CDF of a probability measure given by atoms; the terminal value is pinned to 1.
    pub fn from_atoms(atoms: &Atoms<S>) -> Result<Self> {
        if atoms.atoms().is_empty() {
            return Err(Error::InvalidInput("empty measure".into()));
        }
        let mut bps = Vec::with_capacity(atoms.atoms().len());
        let mut vals = Vec::with_capacity(atoms.atoms().len());
        let mut acc = S::zero();
        for (x, m) in atoms.atoms() {
            acc = acc + m.clone();
            bps.push(x.clone());
            vals.push(acc.clone());
        }
        *vals.last_mut().unwrap() = S::one();
        StepCDF::new(bps, vals)
    }

    /// Convenience: CDF of the weighted sample `(value, weight)`.
    pub fn from_weighted(samples: Vec<(S, S)>) -> Result<Self> {
        Self::from_atoms(&Atoms::from_unsorted(samples))
    }

    pub fn dirac(x: S) -> Self {
        StepCDF { breakpoints: vec![x], values: vec![S::one()] }
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// F(r).
    pub fn eval(&self, r: &S) -> S {
        let k = self.breakpoints.partition_point(|b| b.cmp_total(r) != Ordering::Greater);
        if k == 0 {
            S::zero()
        } else {
            self.values[k - 1].clone()
        }
    }

    /// Mass of the atom at each breakpoint.
    pub fn masses(&self) -> Vec<S> {
        let mut prev = S::zero();
        self.values
            .iter()
            .map(|v| {
                let m = v.clone() - prev.clone();
                prev = v.clone();
                m
            })
            .collect()
    }

    /// Generalized inverse inf{r : F(r) > u}; the largest breakpoint for u = 1.
    pub fn quantile(&self, u: &S) -> Result<S> {
        let zero = S::zero();
        let one = S::one();
        if u.cmp_total(&zero) == Ordering::Less || u.cmp_total(&one) == Ordering::Greater {
            return Err(Error::InvalidInput(format!("quantile level {u} outside [0,1]")));
        }
        let k = self.values.partition_point(|v| v.cmp_total(u) != Ordering::Greater);
        Ok(self.breakpoints[k.min(self.breakpoints.len() - 1)].clone())
    }

    pub fn max_breakpoint(&self) -> &S {
        self.breakpoints.last().unwrap()
    }

    /// Weighted mixture Σ c_i F_i with Σ c_i = 1.
    pub fn mixture(parts: &[(S, &StepCDF<S>)]) -> Result<Self> {
        let mut raw = Vec::new();
        for (c, f) in parts {
            for (b, m) in f.breakpoints.iter().zip(f.masses()) {
                raw.push((b.clone(), c.clone() * m));
            }
        }
        Self::from_weighted(raw)
    }

    /// Approximate equality for float CDFs, merging breakpoints within `tol`
    /// as for atoms.
    pub fn eq_tol(&self, other: &Self, tol: f64) -> bool {
        let runs = |f: &Self| {
            let mut out: Vec<(S, S)> = Vec::with_capacity(f.breakpoints.len());
            for (b, v) in f.breakpoints.iter().zip(&f.values) {
                match out.last_mut() {
                    Some(last) if last.0.eq_tol(b, tol) => last.1 = v.clone(),
                    _ => out.push((b.clone(), v.clone())),
                }
            }
            out
        };
        let (a, b) = (runs(self), runs(other));
        a.len() == b.len() && a.iter().zip(&b).all(|(a, b)| a.0.eq_tol(&b.0, tol) && a.1.eq_tol(&b.1, tol))
    }

    /// CSV rows `r,value` at the breakpoints.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            s.push_str(&format!("{b},{v}\n"));
        }
        s
    }
}

fn merged_levels<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out: Vec<S> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j >= b.len() || (i < a.len() && a[i].cmp_total(&b[j]) != Ordering::Greater) {
            i += 1;
            a[i - 1].clone()
        } else {
            j += 1;
            b[j - 1].clone()
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

/// ∫₀^∞ |F − G| dr, exact over merged breakpoints.
pub fn w1_cdf<S: Scalar>(f: &StepCDF<S>, g: &StepCDF<S>) -> S {
    let grid = merged_levels(f.breakpoints(), g.breakpoints());
    let mut acc = S::zero();
    for k in 0..grid.len().saturating_sub(1) {
        let diff = (f.eval(&grid[k]) - g.eval(&grid[k])).abs_val();
        if !diff.is_zero() {
            acc = acc + diff * (grid[k + 1].clone() - grid[k].clone());
        }
    }
    acc
}

/// ∫₀¹ |F⁻¹(u) − G⁻¹(u)|^p du (the p-th power of W_p), exact over merged levels.
pub fn wp_quantile<S: Scalar>(f: &StepCDF<S>, g: &StepCDF<S>, p: PExponent) -> Result<S> {
    let pp = match p {
        PExponent::Finite(pp) => pp,
        PExponent::Infinity => return Err(Error::Unsupported("wp_quantile with p = inf".into())),
    };
    let mut levels = vec![S::zero()];
    levels.extend(merged_levels(f.values(), g.values()));
    let mut acc = S::zero();
    for k in 0..levels.len() - 1 {
        let du = levels[k + 1].clone() - levels[k].clone();
        if du.is_zero() {
            continue;
        }
        let diff = (f.quantile(&levels[k])? - g.quantile(&levels[k])?).abs_val();
        if !diff.is_zero() {
            acc = acc + du * diff.powu(pp);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Rational};

    fn uniform01() -> StepCDF<Rational> {
        StepCDF::new(vec![qi(0), qi(1)], vec![q(1, 2), qi(1)]).unwrap()
    }

    #[test]
    fn quantile_examples() {
        let d0 = StepCDF::dirac(qi(0));
        assert_eq!(d0.quantile(&q(1, 2)).unwrap(), qi(0));
        assert_eq!(d0.quantile(&q(99, 100)).unwrap(), qi(0));
        let f = uniform01();
        assert_eq!(f.quantile(&q(1, 4)).unwrap(), qi(0));
        assert_eq!(f.quantile(&q(3, 4)).unwrap(), qi(1));
        assert_eq!(f.quantile(&q(1, 2)).unwrap(), qi(1));
        assert_eq!(f.quantile(&qi(1)).unwrap(), qi(1));
        assert!(f.quantile(&q(3, 2)).is_err());
    }

    #[test]
    fn delta3_global_quantile() {
        // 3 diagonal pairs at 0 and 6 off-diagonal pairs at 1, each of mass 1/9
        let mut pairs = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                pairs.push((if i == j { qi(0) } else { qi(1) }, q(1, 9)));
            }
        }
        let f = StepCDF::from_weighted(pairs).unwrap();
        assert_eq!(f.values(), &[q(1, 3), qi(1)]);
        assert_eq!(f.quantile(&q(1, 2)).unwrap(), qi(1));
    }

    #[test]
    fn w1_translation_and_identity() {
        let d0 = StepCDF::dirac(qi(0));
        let d1 = StepCDF::dirac(qi(1));
        assert_eq!(w1_cdf(&d0, &d1), qi(1));
        assert_eq!(w1_cdf(&d0, &d0), qi(0));
        for p in 1..4 {
            assert_eq!(wp_quantile(&d0, &d1, PExponent::Finite(p)).unwrap(), qi(1));
        }
        assert!(wp_quantile(&d0, &d1, PExponent::Infinity).is_err());
    }

    #[test]
    fn eval_is_right_continuous() {
        let f = uniform01();
        assert_eq!(f.eval(&q(-1, 2)), qi(0));
        assert_eq!(f.eval(&qi(0)), q(1, 2));
        assert_eq!(f.eval(&q(1, 2)), q(1, 2));
        assert_eq!(f.eval(&qi(1)), qi(1));
    }

    #[test]
    fn rejects_invalid_cdfs() {
        assert!(StepCDF::new(vec![qi(1), qi(0)], vec![q(1, 2), qi(1)]).is_err());
        assert!(StepCDF::new(vec![qi(0), qi(1)], vec![q(1, 2), q(1, 3)]).is_err());
        assert!(StepCDF::new(vec![qi(0)], vec![q(1, 2)]).is_err());
    }

    #[test]
    fn float_comparison_merges_split_locations() {
        let a = Atoms::from_unsorted(vec![(1.0, 0.25), (1.0 + 1e-15, 0.25), (2.0, 0.5)]);
        let b = Atoms::from_unsorted(vec![(1.0, 0.5), (2.0, 0.5)]);
        assert_eq!(a.atoms().len(), 3);
        assert!(a.eq_tol(&b, 1e-9));
        let fa = StepCDF::from_atoms(&a).unwrap();
        let fb = StepCDF::from_atoms(&b).unwrap();
        assert!(fa.eq_tol(&fb, 1e-9));
        let c = Atoms::from_unsorted(vec![(1.0, 0.25), (1.5, 0.25), (2.0, 0.5)]);
        assert!(!c.eq_tol(&b, 1e-9));
    }
}
