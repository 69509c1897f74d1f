use std::path::PathBuf;

use anyhow::Result;
use clap::{Subcommand, ValueEnum};
use gromon_core::gromov::{gm_exact_with_guard, gm_heuristic, SizeGuard, DEFAULT_RESTARTS};
use gromon_core::invariants::{lower_bound_global, lower_bound_local_kantorovich, lower_bound_local_monge, MapClass};
use gromon_core::{Extended, FiniteMMSpace, Scalar};
use serde_json::{json, Value};

use crate::io::{require_seed, space_pair_from_files, SpacePair};
use crate::{Global, Outcome, Status};

#[derive(Subcommand, Debug)]
pub enum Dist {
    /// d_GM,p(X, Y): the least p-distortion over measure-preserving maps X → Y.
    Gm {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: MethodArg,
        /// Local-search restarts for the heuristic.
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Lower bounds from global and local distance distributions.
    Bounds {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// L_H: W_p between global distributions.
    Global,
    /// L_h: optimal Monge transport of local distributions.
    Local,
    /// L_h^U: the Kantorovich relaxation of L_h.
    Kantorovich,
    All,
}

pub fn size_guard(g: &Global) -> SizeGuard {
    match g.size_guard {
        Some(n) => SizeGuard { uniform: n, general: n },
        None => SizeGuard::default(),
    }
}

pub fn run(cmd: Dist, g: &Global) -> Result<Outcome> {
    match cmd {
        Dist::Gm { x, y, method, restarts } => {
            let seed = if method == MethodArg::Heuristic { Some(require_seed(g)?) } else { None };
            match space_pair_from_files(&x, &y, g)? {
                SpacePair::Rational(a, b) => gm(&a, &b, g, seed, restarts),
                SpacePair::Float(a, b) => gm(&a, &b, g, seed, restarts),
            }
        }
        Dist::Bounds { x, y, which } => match space_pair_from_files(&x, &y, g)? {
            SpacePair::Rational(a, b) => bounds(&a, &b, g, which),
            SpacePair::Float(a, b) => bounds(&a, &b, g, which),
        },
    }
}

fn gm<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, g: &Global, seed: Option<u64>, restarts: usize) -> Result<Outcome> {
    log::info!("d_GM,{} between spaces of sizes {} and {}", g.p, x.n(), y.n());
    let r = match seed {
        Some(s) => gm_heuristic(x, y, g.p, s, restarts)?,
        None => gm_exact_with_guard(x, y, g.p, size_guard(g))?,
    };
    let status = if r.value.is_infinite() { Status::Infinite } else { Status::Ok };
    Ok(Outcome::json_with(r.to_json(), status))
}

fn global_bound<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, g: &Global) -> Result<Value> {
    let v = lower_bound_global(x, y, g.p)?;
    Ok(json!({"value": v.value_json(), "witness": Value::Null, "method": "global", "p": g.p.to_string()}))
}

fn local_bound<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>) -> Result<(Value, bool)> {
    Ok(match lower_bound_local_monge(x, y, MapClass::All)? {
        Extended::Finite(a) => (json!({"value": a.cost.to_json(), "witness": a.map.assignment(), "method": "local"}), false),
        Extended::Infinite => (json!({"value": "inf", "witness": Value::Null, "method": "local"}), true),
    })
}

fn kantorovich_bound<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>) -> Result<Value> {
    let (plan, cost) = lower_bound_local_kantorovich(x, y)?;
    let rows: Vec<Vec<Value>> = plan.to_matrix().iter().map(|r| r.iter().map(Scalar::to_json).collect()).collect();
    Ok(json!({"value": cost.to_json(), "witness": Value::Null, "coupling": rows, "method": "kantorovich"}))
}

fn bounds<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, g: &Global, which: Which) -> Result<Outcome> {
    Ok(match which {
        Which::Global => Outcome::json(global_bound(x, y, g)?),
        Which::Local => {
            let (v, inf) = local_bound(x, y)?;
            Outcome::json_with(v, if inf { Status::Infinite } else { Status::Ok })
        }
        Which::Kantorovich => Outcome::json(kantorovich_bound(x, y)?),
        Which::All => Outcome::json(json!({
            "global": global_bound(x, y, g)?,
            "local": local_bound(x, y)?.0,
            "kantorovich": kantorovich_bound(x, y)?,
        })),
    })
}
