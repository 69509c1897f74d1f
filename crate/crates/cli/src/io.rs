use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use gromon_core::json::AnySpace;
use gromon_core::scalar::{parse_rational, Rational, Scalar};
use gromon_core::FiniteMMSpace;
use gromon_shapes::SampledSpace;
use serde_json::{json, Value};

use crate::{Global, ScalarMode};

/// Reads a JSON document; `-` is stdin.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = read_text(path)?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write_output(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|_| out.flush()) {
                // a closed pipe (`| head`) is the reader's choice, not a failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut body = serde_json::to_string_pretty(v)?;
    body.push('\n');
    fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))
}

pub fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).with_context(|| format!("`{s}` is not a rational number"))
}

pub fn require_seed(g: &Global) -> Result<u64> {
    match g.seed {
        Some(s) => Ok(s),
        None => bail!("this command is randomized; pass --seed"),
    }
}

/// Two spaces read into one field.
pub enum SpacePair {
    Rational(FiniteMMSpace<Rational>, FiniteMMSpace<Rational>),
    Float(FiniteMMSpace<f64>, FiniteMMSpace<f64>),
}

/// Rational when both documents are rational and `--scalar float` is absent.
pub fn space_pair(a: &Value, b: &Value, g: &Global) -> Result<SpacePair> {
    let x = AnySpace::from_json(a, Some(g.tol))?;
    let y = AnySpace::from_json(b, Some(g.tol))?;
    Ok(match (x, y, g.scalar) {
        (AnySpace::Rational(x), AnySpace::Rational(y), None | Some(ScalarMode::Rational)) => SpacePair::Rational(x, y),
        (x, y, None | Some(ScalarMode::Float)) => {
            let rebuild = |s: AnySpace| -> Result<FiniteMMSpace<f64>> {
                let f = s.to_float();
                // carry the requested tolerance onto converted spaces
                Ok(FiniteMMSpace::from_flat(
                    f.n(),
                    f.dist_matrix().into_iter().flatten().collect(),
                    f.weights().to_vec(),
                    gromon_core::SpaceOptions { pseudo: f.is_pseudo(), check_triangle: false, tol: g.tol },
                )?)
            };
            SpacePair::Float(rebuild(x)?, rebuild(y)?)
        }
        _ => bail!("float input cannot be read with --scalar rational"),
    })
}

pub fn space_pair_from_files(a: &Path, b: &Path, g: &Global) -> Result<SpacePair> {
    space_pair(&read_json(a)?, &read_json(b)?, g)
}

/// A space document with its sampling provenance and coordinates attached.
pub fn sampled_json<S: Scalar>(s: &SampledSpace<S>) -> Value {
    let mut v = gromon_core::json::space_to_json(&s.space);
    v["provenance"] = json!({
        "descriptor": s.provenance.descriptor,
        "count": s.provenance.count,
        "rule": s.provenance.rule,
    });
    v["points"] = json!(s.points);
    v
}
