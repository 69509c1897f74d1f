use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use gromon_core::gromov::{gm_exact_with_guard, partition_equality_check, quasi_metric_suite, BlockPairing, Partition, SuiteOptions};
use gromon_core::invariants::{global_distribution, lower_bound_global, lower_bound_local_kantorovich, lower_bound_local_monge, MapClass};
use gromon_core::scalar::{q, qi, Rational};
use gromon_core::{Extended, FiniteMMSpace, PExponent, Scalar};
use gromon_graphs::generators::random_tree;
use gromon_graphs::{node_multiset, reconstruct_tree, tree_canonical_form, GraphError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cmd::dist::size_guard;
use crate::io::{read_json, require_seed, space_pair, SpacePair};
use crate::{Global, Outcome, Status};

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Checks that a block pairing matches every cross-distance distribution.
    ///
    /// Takes `PAIR` (with an embedded pairing), `PAIR PAIRING`, or `X Y PAIRING`.
    Partition {
        #[arg(num_args = 1..=3, required = true)]
        files: Vec<PathBuf>,
    },
    /// Nonnegativity, triangle inequality, symmetry and bound sandwich on
    /// random uniform triples, with exact arithmetic.
    Quasimetric {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Rebuilds random trees from their node multisets and compares canonical forms.
    Reconstruct {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
    },
    /// L_h^U ≤ L_h ≤ d_GM,1 and L_H ≤ d_GM,1, on two given spaces or on
    /// random pairs.
    Sandwich {
        #[arg(num_args = 0..=2)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn verdict(pass: bool, mut report: Value) -> Outcome {
    report["pass"] = Value::Bool(pass);
    Outcome::json_with(report, if pass { Status::Ok } else { Status::Failed })
}

/// Distances drawn from {1, 5/4, 3/2, 7/4, 2}, so every matrix is a metric.
fn random_uniform(rng: &mut ChaCha8Rng, n: usize) -> FiniteMMSpace<Rational> {
    let mut d = vec![vec![qi(0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = q(4 + rng.random_range(0..5), 4);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    FiniteMMSpace::uniform(d).expect("distances in [1, 2] satisfy the triangle inequality")
}

fn labels(v: &Value, key: &str) -> Result<Vec<usize>> {
    v.get(key)
        .and_then(Value::as_array)
        .with_context(|| format!("pairing needs an array `{key}`"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).with_context(|| format!("`{key}` entries are block numbers")))
        .collect()
}

fn pairing(v: &Value) -> Result<(Partition, Partition, BlockPairing)> {
    let pairs = v
        .get("pairs")
        .and_then(Value::as_array)
        .context("pairing needs an array `pairs` of [i, j, k, l]")?
        .iter()
        .map(|p| {
            let e: Vec<usize> = p.as_array().into_iter().flatten().filter_map(Value::as_u64).map(|x| x as usize).collect();
            if e.len() != 4 {
                bail!("pairing entry {p} is not [i, j, k, l]");
            }
            Ok((e[0], e[1], e[2], e[3]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Partition::new(labels(v, "labels_x")?)?, Partition::new(labels(v, "labels_y")?)?, BlockPairing { pairs }))
}

fn partition_report<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, p: &(Partition, Partition, BlockPairing), tol: f64) -> Result<Outcome> {
    let check = partition_equality_check(x, y, &p.0, &p.1, &p.2)?;
    let global = global_distribution(x).eq_tol(&global_distribution(y), tol);
    Ok(verdict(check && global, json!({"partition_check": check, "global_equal": global, "scalar": S::KIND.name()})))
}

/// Violations of the bound chain for one ordered pair.
fn sandwich<S: Scalar>(x: &FiniteMMSpace<S>, y: &FiniteMMSpace<S>, g: &Global) -> Result<Vec<String>> {
    let one = PExponent::Finite(1);
    let tol = x.tol().max(y.tol());
    let mut bad = Vec::new();
    let gm = gm_exact_with_guard(x, y, one, size_guard(g))?.value;
    let lh = lower_bound_local_monge(x, y, MapClass::All)?;
    let (_, lu) = lower_bound_local_kantorovich(x, y)?;
    let lg = lower_bound_global(x, y, one)?.power;
    if let Extended::Finite(a) = &lh {
        if !lu.le_tol(&a.cost, tol) {
            bad.push(format!("L_h^U = {lu} > L_h = {}", a.cost));
        }
    }
    if let Extended::Finite(d) = &gm {
        match &lh {
            Extended::Finite(a) if !a.cost.le_tol(&d.power, tol) => bad.push(format!("L_h = {} > d_GM,1 = {}", a.cost, d.power)),
            Extended::Infinite => bad.push(format!("L_h = inf > d_GM,1 = {}", d.power)),
            _ => {}
        }
        if !lg.le_tol(&d.power, tol) {
            bad.push(format!("L_H = {lg} > d_GM,1 = {}", d.power));
        }
    }
    Ok(bad)
}

pub fn run(cmd: Verify, g: &Global) -> Result<Outcome> {
    match cmd {
        Verify::Partition { files } => {
            let (x, y, p) = match files.as_slice() {
                [pair] => {
                    let doc = read_json(pair)?;
                    let p = doc.get("pairing").context("no embedded `pairing`; pass a pairing file")?.clone();
                    (doc["x"].clone(), doc["y"].clone(), p)
                }
                [pair, p] => {
                    let doc = read_json(pair)?;
                    (doc["x"].clone(), doc["y"].clone(), read_json(p)?)
                }
                [x, y, p] => (read_json(x)?, read_json(y)?, read_json(p)?),
                _ => unreachable!("clap limits the file count"),
            };
            let p = pairing(&p)?;
            match space_pair(&x, &y, g)? {
                SpacePair::Rational(a, b) => partition_report(&a, &b, &p, 0.0),
                SpacePair::Float(a, b) => partition_report(&a, &b, &p, g.tol),
            }
        }
        Verify::Quasimetric { n, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(require_seed(g)?);
            let opts = SuiteOptions { guard: size_guard(g), ..SuiteOptions::default() };
            let (mut pairs, mut triples, mut sandwich_checks) = (0, 0, 0);
            let mut violations: Vec<String> = Vec::new();
            for t in 0..trials {
                let spaces: Vec<_> = (0..3).map(|_| random_uniform(&mut rng, n)).collect();
                let rep = quasi_metric_suite(&spaces, g.p, opts)?;
                pairs += rep.pairs;
                triples += rep.triples;
                sandwich_checks += rep.sandwich_checks;
                violations.extend(rep.violations.into_iter().map(|v| format!("trial {t}: {v}")));
            }
            log::info!("quasi-metric suite: {trials} trials, {} violations", violations.len());
            Ok(verdict(
                violations.is_empty(),
                json!({"trials": trials, "pairs": pairs, "triples": triples, "sandwich_checks": sandwich_checks, "violations": violations}),
            ))
        }
        Verify::Reconstruct { trials, max_edges } => {
            let mut rng = ChaCha8Rng::seed_from_u64(require_seed(g)?);
            let (mut passed, mut resampled) = (0usize, 0usize);
            let mut failures = Vec::new();
            let mut done = 0;
            while done < trials {
                let t = random_tree(&mut rng, max_edges);
                match reconstruct_tree(&node_multiset(&t)) {
                    // equal node functions: the reconstruction hypothesis fails, draw again
                    Err(GraphError::DistinctnessViolated) if resampled < trials => {
                        resampled += 1;
                        continue;
                    }
                    Ok(back) if tree_canonical_form(&back)? == tree_canonical_form(&t)? => passed += 1,
                    Ok(_) => failures.push(format!("trial {done}: canonical forms differ")),
                    Err(e) => failures.push(format!("trial {done}: {e}")),
                }
                done += 1;
            }
            Ok(verdict(passed == trials, json!({"trials": trials, "passed": passed, "resampled": resampled, "failures": failures})))
        }
        Verify::Sandwich { files, n, trials } => {
            let mut violations = Vec::new();
            let mut checked = 0;
            match files.as_slice() {
                [] => {
                    let mut rng = ChaCha8Rng::seed_from_u64(require_seed(g)?);
                    for t in 0..trials {
                        let (x, y) = (random_uniform(&mut rng, n), random_uniform(&mut rng, n));
                        violations.extend(sandwich(&x, &y, g)?.into_iter().map(|v| format!("trial {t}: {v}")));
                        checked += 1;
                    }
                }
                [a, b] => {
                    let (va, vb) = (read_json(a)?, read_json(b)?);
                    for (u, v) in [(&va, &vb), (&vb, &va)] {
                        violations.extend(match space_pair(u, v, g)? {
                            SpacePair::Rational(x, y) => sandwich(&x, &y, g)?,
                            SpacePair::Float(x, y) => sandwich(&x, &y, g)?,
                        });
                        checked += 1;
                    }
                }
                _ => bail!("sandwich takes two space files, or none for random pairs"),
            }
            Ok(verdict(violations.is_empty(), json!({"pairs": checked, "violations": violations})))
        }
    }
}
