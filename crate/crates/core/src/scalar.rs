//! Scalar fields used throughout: exact rationals and tolerance-compared floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Which scalar field a space is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    Float,
}

impl ScalarKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Float => "float",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(ScalarKind::Rational),
            "float" => Ok(ScalarKind::Float),
            other => Err(Error::Parse(format!("unknown scalar kind `{other}`"))),
        }
    }
}

/// An ordered field element. Rationals compare exactly; floats compare up to
/// an explicit absolute tolerance where the API asks for one.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const KIND: ScalarKind;

    fn from_rational(q: &Rational) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(n), BigInt::from(d)))
    }
    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Total order; NaN-free floats use `total_cmp`.
    fn cmp_total(&self, other: &Self) -> Ordering;
    /// Equality up to `tol` (ignored for exact fields).
    fn eq_tol(&self, other: &Self, tol: f64) -> bool;
    /// `self <= other` up to `tol` (ignored for exact fields).
    fn le_tol(&self, other: &Self, tol: f64) -> bool {
        self.cmp_total(other) != Ordering::Greater || self.eq_tol(other, tol)
    }
    fn powu(&self, p: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..p {
            acc = acc * self.clone();
        }
        acc
    }
    /// The nonnegative p-th root when it lies in the field.
    fn nth_root(&self, p: u32) -> Option<Self>;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    fn max_of(a: Self, b: Self) -> Self {
        if a.cmp_total(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn eq_tol(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn powu(&self, p: u32) -> Self {
        num_traits::pow::pow(self.clone(), p as usize)
    }
    fn nth_root(&self, p: u32) -> Option<Self> {
        rational_nth_root(self, p)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(BigInt::from(i)))
                } else {
                    Err(Error::Parse(format!("rational field expects \"p/q\" strings, got {n}")))
                }
            }
            other => Err(Error::Parse(format!("not a rational: {other}"))),
        }
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
    fn eq_tol(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
    fn powu(&self, p: u32) -> Self {
        self.powi(p as i32)
    }
    fn nth_root(&self, p: u32) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.powf(1.0 / p as f64))
        }
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad float {n}"))),
            Value::String(s) => {
                if let Ok(x) = s.parse::<f64>() {
                    Ok(x)
                } else {
                    Ok(rational_to_f64(&parse_rational(s)?))
                }
            }
            other => Err(Error::Parse(format!("not a float: {other}"))),
        }
    }
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(q) = Rational::from_str(t) {
        if q.denom().is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(q);
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let num = BigInt::from_str(&digits).map_err(|e| Error::Parse(e.to_string()))?;
            let den = num_traits::pow::pow(BigInt::from(10), frac.len());
            let q = Rational::new(num, den);
            return Ok(if neg { -q } else { q });
        }
    }
    Err(Error::Parse(format!("cannot parse `{s}` as a rational")))
}

/// Shorthand constructor used heavily in tests and generators.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Correctly handles numerators and denominators far outside the f64 range.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let (n, d) = if shift > 0 {
        (q.numer().clone(), q.denom().clone() << shift as usize)
    } else {
        (q.numer().clone() << (-shift) as usize, q.denom().clone())
    };
    let ratio = (n / d).to_f64().unwrap_or(f64::NAN);
    ratio * 2f64.powi(shift as i32)
}

/// Exact nonnegative p-th root when numerator and denominator are perfect powers.
pub fn rational_nth_root(x: &Rational, p: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if p == 1 {
        return Some(x.clone());
    }
    let rn = x.numer().nth_root(p);
    let rd = x.denom().nth_root(p);
    if num_traits::pow::pow(rn.clone(), p as usize) == *x.numer()
        && num_traits::pow::pow(rd.clone(), p as usize) == *x.denom()
    {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// Least common multiple of the denominators of a family of rationals.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = num_integer::Integer::lcm(&l, x.denom());
    }
    l
}

/// The exponent p of an L^p cost: a positive integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PExponent {
    Finite(u32),
    Infinity,
}

impl PExponent {
    pub fn one() -> Self {
        PExponent::Finite(1)
    }

    pub fn new(p: u32) -> Result<Self> {
        if p == 0 {
            Err(Error::InvalidInput("p must be at least 1".into()))
        } else {
            Ok(PExponent::Finite(p))
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            PExponent::Finite(p) => Some(p),
            PExponent::Infinity => None,
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" | "oo" => Ok(PExponent::Infinity),
            t => {
                let p: u32 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("p must be a positive integer or `inf`, got `{s}`")))?;
                PExponent::new(p)
            }
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A value that may be +∞.
#[derive(Clone, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T> Extended<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(t) => Some(t),
            Extended::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Extended::Finite(t) => Some(t),
            Extended::Infinite => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Extended<U> {
        match self {
            Extended::Finite(t) => Extended::Finite(f(t)),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

/// An L^p quantity kept as its exact p-th power, so comparisons never need roots.
/// For p = ∞ `power` holds the maximum itself.
#[derive(Clone, Debug, PartialEq)]
pub struct PValue<S> {
    pub p: PExponent,
    pub power: S,
}

impl<S: Scalar> PValue<S> {
    pub fn new(p: PExponent, power: S) -> Self {
        PValue { p, power }
    }

    pub fn zero(p: PExponent) -> Self {
        PValue { p, power: S::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.power.is_zero()
    }

    /// The value itself when it is representable in the field.
    pub fn exact_value(&self) -> Option<S> {
        match self.p {
            PExponent::Finite(p) => self.power.nth_root(p),
            PExponent::Infinity => Some(self.power.clone()),
        }
    }

    pub fn value_f64(&self) -> f64 {
        match self.p {
            PExponent::Finite(1) | PExponent::Infinity => self.power.to_f64(),
            PExponent::Finite(p) => self.power.to_f64().powf(1.0 / p as f64),
        }
    }

    /// Compares two values with the same exponent.
    pub fn cmp_same(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.p, other.p);
        self.power.cmp_total(&other.power)
    }

    /// JSON value: exact string/number when available, else a float.
    pub fn value_json(&self) -> Value {
        match self.exact_value() {
            Some(v) if S::KIND == ScalarKind::Rational => v.to_json(),
            _ => serde_json::Number::from_f64(self.value_f64()).map(Value::Number).unwrap_or(Value::Null),
        }
    }
}

impl<S: Scalar> Extended<PValue<S>> {
    pub fn value_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.value_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn value_json(&self) -> Value {
        match self {
            Extended::Finite(v) => v.value_json(),
            Extended::Infinite => Value::String("inf".into()),
        }
    }
}

/// `a <= b` for p-values with possibly different exponents, decided exactly by
/// raising both sides to a common integer power.
pub fn pvalue_le<S: Scalar>(a: &PValue<S>, b: &PValue<S>, tol: f64) -> bool {
    match (a.p, b.p) {
        (PExponent::Finite(pa), PExponent::Finite(pb)) => {
            let lhs = a.power.powu(pb);
            let rhs = b.power.powu(pa);
            lhs.le_tol(&rhs, tol)
        }
        (PExponent::Finite(pa), PExponent::Infinity) => a.power.le_tol(&b.power.powu(pa), tol),
        (PExponent::Infinity, PExponent::Finite(pb)) => a.power.powu(pb).le_tol(&b.power, tol),
        (PExponent::Infinity, PExponent::Infinity) => a.power.le_tol(&b.power, tol),
    }
}
