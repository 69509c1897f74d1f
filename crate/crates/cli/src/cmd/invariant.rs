use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Subcommand;
use gromon_core::invariants::{global_distribution, local_distribution_at};
use gromon_core::json::AnySpace;
use gromon_core::transport::StepCDF;
use gromon_core::{FiniteMMSpace, Scalar};
use gromon_graphs::{node_multiset, MetricGraph};
use serde_json::{json, Value};

use crate::io::read_json;
use crate::{Global, Outcome, ScalarMode};

#[derive(Subcommand, Debug)]
pub enum Invariant {
    /// H_X: the distribution of the distance between two random points.
    Global {
        space: PathBuf,
        /// Print `r,value` rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// h_X(x, ·): the distribution of the distance from one point, or from each.
    Local {
        space: PathBuf,
        #[arg(long)]
        point: Option<usize>,
        #[arg(long)]
        csv: bool,
    },
    /// The node volume functions of a metric graph, exactly.
    Nodemultiset { graph: PathBuf },
}

fn cdf_json<S: Scalar>(f: &StepCDF<S>) -> Value {
    json!({
        "breakpoints": f.breakpoints().iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "values": f.values().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

fn distributions<S: Scalar>(x: &FiniteMMSpace<S>, local: Option<Option<usize>>, csv: bool) -> Result<Outcome> {
    let cdfs: Vec<StepCDF<S>> = match local {
        None => vec![global_distribution(x)],
        Some(Some(i)) if i >= x.n() => bail!("point {i} out of range 0..{}", x.n()),
        Some(Some(i)) => vec![local_distribution_at(x, i)],
        Some(None) => (0..x.n()).map(|i| local_distribution_at(x, i)).collect(),
    };
    if csv {
        if cdfs.len() != 1 {
            bail!("--csv prints one distribution; pick one with --point");
        }
        return Ok(Outcome::text(cdfs[0].to_csv()));
    }
    Ok(Outcome::json(match local {
        Some(None) => Value::Array(cdfs.iter().map(cdf_json).collect()),
        _ => cdf_json(&cdfs[0]),
    }))
}

fn load(path: &PathBuf, g: &Global) -> Result<AnySpace> {
    let s = AnySpace::from_json(&read_json(path)?, Some(g.tol))?;
    Ok(match (s, g.scalar) {
        (AnySpace::Rational(x), Some(ScalarMode::Float)) => AnySpace::Float(x.to_float()),
        (AnySpace::Float(_), Some(ScalarMode::Rational)) => bail!("float input cannot be read with --scalar rational"),
        (s, _) => s,
    })
}

pub fn run(cmd: Invariant, g: &Global) -> Result<Outcome> {
    match cmd {
        Invariant::Global { space, csv } => match load(&space, g)? {
            AnySpace::Rational(x) => distributions(&x, None, csv),
            AnySpace::Float(x) => distributions(&x, None, csv),
        },
        Invariant::Local { space, point, csv } => match load(&space, g)? {
            AnySpace::Rational(x) => distributions(&x, Some(point), csv),
            AnySpace::Float(x) => distributions(&x, Some(point), csv),
        },
        Invariant::Nodemultiset { graph } => {
            let gr = MetricGraph::from_json(&read_json(&graph)?)?;
            Ok(Outcome::json(node_multiset(&gr).to_json()))
        }
    }
}
