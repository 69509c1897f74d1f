//! JSON encoding of spaces:
//! `{"n": int, "dist": [[..]], "weights": [..], "scalar": "rational"|"float"}`,
//! with rationals written as `"p/q"` strings. An optional `"pseudo": true`
//! marks pseudo-metric spaces.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, ScalarKind};
use crate::space::{FiniteMMSpace, SpaceOptions, DEFAULT_TOL};

pub fn space_to_json<S: Scalar>(x: &FiniteMMSpace<S>) -> Value {
    let n = x.n();
    let dist: Vec<Value> = (0..n).map(|i| Value::Array(x.row(i).iter().map(|d| d.to_json()).collect())).collect();
    let weights: Vec<Value> = x.weights().iter().map(|w| w.to_json()).collect();
    let mut v = json!({
        "n": n,
        "dist": dist,
        "weights": weights,
        "scalar": S::KIND.name(),
    });
    if x.is_pseudo() {
        v["pseudo"] = Value::Bool(true);
    }
    v
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

/// Reads a space into the field `S`, whatever scalar tag the document carries.
pub fn space_from_json<S: Scalar>(v: &Value, tol: Option<f64>) -> Result<FiniteMMSpace<S>> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| Error::Parse("`n` must be a nonnegative integer".into()))? as usize;
    let rows = field(v, "dist")?.as_array().ok_or_else(|| Error::Parse("`dist` must be an array".into()))?;
    if rows.len() != n {
        return Err(Error::Parse(format!("`dist` has {} rows, expected {n}", rows.len())));
    }
    let mut flat = Vec::with_capacity(n * n);
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::Parse("`dist` rows must be arrays".into()))?;
        if r.len() != n {
            return Err(Error::Parse(format!("`dist` row has {} entries, expected {n}", r.len())));
        }
        for d in r {
            flat.push(S::from_json(d)?);
        }
    }
    let weights = match v.get("weights") {
        Some(Value::Array(ws)) => ws.iter().map(S::from_json).collect::<Result<Vec<S>>>()?,
        Some(_) => return Err(Error::Parse("`weights` must be an array".into())),
        None => vec![S::one() / S::from_usize(n.max(1)); n],
    };
    let pseudo = v.get("pseudo").and_then(Value::as_bool).unwrap_or(false);
    // rationals ignore the tolerance
    let tol = tol.unwrap_or(DEFAULT_TOL);
    FiniteMMSpace::from_flat(n, flat, weights, SpaceOptions { pseudo, check_triangle: true, tol })
}

/// The scalar tag of a space document; rational when absent.
pub fn scalar_kind_of(v: &Value) -> Result<ScalarKind> {
    match v.get("scalar") {
        Some(Value::String(s)) => ScalarKind::parse(s),
        Some(other) => Err(Error::Parse(format!("bad `scalar` tag {other}"))),
        None => Ok(ScalarKind::Rational),
    }
}

/// A space over whichever field its document declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySpace {
    Rational(FiniteMMSpace<Rational>),
    Float(FiniteMMSpace<f64>),
}

impl AnySpace {
    pub fn from_json(v: &Value, tol: Option<f64>) -> Result<Self> {
        Ok(match scalar_kind_of(v)? {
            ScalarKind::Rational => AnySpace::Rational(space_from_json(v, tol)?),
            ScalarKind::Float => AnySpace::Float(space_from_json(v, tol)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnySpace::Rational(x) => space_to_json(x),
            AnySpace::Float(x) => space_to_json(x),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnySpace::Rational(x) => x.n(),
            AnySpace::Float(x) => x.n(),
        }
    }

    /// Converts to floats; float spaces are returned unchanged.
    pub fn to_float(&self) -> FiniteMMSpace<f64> {
        match self {
            AnySpace::Rational(x) => x.to_float(),
            AnySpace::Float(x) => x.clone(),
        }
    }
}
