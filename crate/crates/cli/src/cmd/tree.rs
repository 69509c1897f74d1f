use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use gromon_graphs::merge::{delta, DEFAULT_MERGE_GUARD};
use gromon_graphs::{reconstruct_tree, tree_canonical_form, MetricGraph, NodeMultiset};
use serde_json::json;

use crate::io::read_json;
use crate::{Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum Tree {
    /// Rebuilds a metric tree from its node multiset.
    Reconstruct { multiset: PathBuf },
    /// A string equal for two trees exactly when they are isometric.
    Canon { graph: PathBuf },
    /// min over node pairs of the interleaving distance of merge trees.
    Delta { t: PathBuf, s: PathBuf },
}

fn graph(path: &PathBuf) -> Result<MetricGraph> {
    Ok(MetricGraph::from_json(&read_json(path)?)?)
}

pub fn run(cmd: Tree, g: &Global) -> Result<Outcome> {
    match cmd {
        Tree::Reconstruct { multiset } => {
            let ms = NodeMultiset::from_json(&read_json(&multiset)?)?;
            let t = reconstruct_tree(&ms)?;
            Ok(Outcome::json(json!({"graph": t.to_json(), "canonical": tree_canonical_form(&t)?})))
        }
        Tree::Canon { graph: path } => Ok(Outcome::json(json!({"canonical": tree_canonical_form(&graph(&path)?)?}))),
        Tree::Delta { t, s } => {
            let guard = g.size_guard.unwrap_or(DEFAULT_MERGE_GUARD);
            let d = delta(&graph(&t)?, &graph(&s)?, guard)?;
            Ok(Outcome::json(json!({"value": d.value.to_string(), "witness": [d.t, d.s], "method": "merge-interleaving"})))
        }
    }
}
