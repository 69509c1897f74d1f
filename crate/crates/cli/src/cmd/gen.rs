use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use gromon_graphs::generators::{glue_tree, lobe_tree, random_graph, random_tree};
use gromon_graphs::MetricGraph;
use gromon_shapes::{
    bloom_point_clouds, dodecahedron_bump_pair, mallows_clarke_octagon, mallows_clarke_pair, sample_curve,
    sample_mallows_clarke_pair, sample_sphere_surface, DecoratedPair, PlaneCurve,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::io::{rational, read_json, require_seed, sampled_json, write_json};
use crate::{Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum Gen {
    /// The two six-point sets on a line with equal distance multisets.
    Bloom {
        /// Write bloomX.json and bloomY.json here instead of printing both.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// A sampled plane curve, or a Mallows-Clarke pair of polygons.
    Curve {
        #[arg(long, value_enum)]
        kind: CurveKind,
        /// Number of samples.
        #[arg(long, default_value_t = 64)]
        m: usize,
        /// Ellipse semi-axes.
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Bumpy circle density amplitude A and frequency n.
        #[arg(long, default_value_t = 0.1)]
        amplitude: f64,
        #[arg(long, default_value_t = 5)]
        freq: u32,
        /// Polygon vertices as `x,y;x,y;...`.
        #[arg(long)]
        vertices: Option<String>,
        /// Mallows-Clarke polygons have 2n sides.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Triangle height relative to the apothem, as `p/q`.
        #[arg(long, default_value = "1/2")]
        height: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// A sampled unit sphere S^1 or S^2.
    Sphere {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        m: usize,
    },
    /// Dodecahedra with pyramids on complementary halves of the faces.
    Polyhedron {
        #[arg(long, default_value = "1/2")]
        height: String,
        /// Samples per surface, 60k².
        #[arg(long, default_value_t = 60)]
        m: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// A lobe tree from a 3×3 matrix of lobe counts, row-major.
    Lobetree {
        #[arg(long, value_delimiter = ',', required = true)]
        matrix: Vec<u32>,
    },
    /// Glues a scaled copy of tree T onto leaf `leaf` of tree S.
    Gluetree {
        s: PathBuf,
        t: PathBuf,
        #[arg(long)]
        leaf: usize,
        /// Scale of T, as `p/q`.
        #[arg(long, default_value = "1/2")]
        delta: String,
    },
    /// A random metric tree with distinct rational edge lengths.
    Randomtree {
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        /// Extra edges closing cycles (gives a graph, not a tree).
        #[arg(long, default_value_t = 0)]
        extra_edges: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Circle,
    Ellipse,
    Bumpy,
    Polygon,
    MallowsClarke,
}

fn parse_vertices(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let xy: Vec<&str> = t.split(',').collect();
            if xy.len() != 2 {
                bail!("vertex `{t}` is not `x,y`");
            }
            Ok([xy[0].trim().parse::<f64>()?, xy[1].trim().parse::<f64>()?])
        })
        .collect()
}

fn pairing_json(p: &DecoratedPair) -> Value {
    let pairs: Vec<[usize; 4]> = p.pairing.pairs.iter().map(|&(i, j, k, l)| [i, j, k, l]).collect();
    json!({
        "labels_x": p.labels,
        "labels_y": p.labels,
        "pairs": pairs,
        "raised_x": p.raised_x,
        "raised_y": p.raised_y,
    })
}

/// Prints the pair as one document, or writes `<prefix>X.json`,
/// `<prefix>Y.json` and (when given) `<prefix>pairing.json` to `dir`.
fn emit_pair(prefix: &str, x: Value, y: Value, pairing: Option<Value>, dir: Option<&Path>) -> Result<Outcome> {
    match dir {
        None => {
            let mut doc = json!({"x": x, "y": y});
            if let Some(p) = pairing {
                doc["pairing"] = p;
            }
            Ok(Outcome::json(doc))
        }
        Some(d) => {
            std::fs::create_dir_all(d).with_context(|| format!("cannot create {}", d.display()))?;
            let mut files = vec![(format!("{prefix}X.json"), x), (format!("{prefix}Y.json"), y)];
            if let Some(p) = pairing {
                files.push((format!("{prefix}pairing.json"), p));
            }
            let mut written = Vec::new();
            for (name, v) in files {
                let path = d.join(name);
                write_json(&path, &v)?;
                written.push(path.display().to_string());
            }
            Ok(Outcome::json(json!({"files": written})))
        }
    }
}

fn decorated(prefix: &str, p: &DecoratedPair, dir: Option<&Path>) -> Result<Outcome> {
    emit_pair(prefix, sampled_json(&p.x), sampled_json(&p.y), Some(pairing_json(p)), dir)
}

pub fn run(cmd: Gen, g: &Global) -> Result<Outcome> {
    match cmd {
        Gen::Bloom { out_dir } => {
            let (x, y) = bloom_point_clouds();
            emit_pair("bloom", sampled_json(&x), sampled_json(&y), None, out_dir.as_deref())
        }
        Gen::Curve { kind, m, a, b, amplitude, freq, vertices, n, height, out_dir } => {
            let curve = match kind {
                CurveKind::Circle => PlaneCurve::Circle,
                CurveKind::Ellipse => PlaneCurve::Ellipse { a, b },
                CurveKind::Bumpy => PlaneCurve::BumpyCircle { amplitude, freq },
                CurveKind::Polygon => {
                    let v = vertices.as_deref().context("--kind polygon needs --vertices")?;
                    PlaneCurve::Polygon(parse_vertices(v)?)
                }
                CurveKind::MallowsClarke => {
                    let h = rational(&height)?;
                    // the octagon uses the published block pairing; other sizes search for one
                    let (x, y, pairing) = if n == 4 { mallows_clarke_octagon(h)? } else { mallows_clarke_pair(n, h)? };
                    let pair = sample_mallows_clarke_pair(&x, &y, pairing, m)?;
                    return decorated("mallows", &pair, out_dir.as_deref());
                }
            };
            Ok(Outcome::json(sampled_json(&sample_curve(&curve, m)?)))
        }
        Gen::Sphere { dim, m } => {
            let seed = require_seed(g)?;
            Ok(Outcome::json(sampled_json(&sample_sphere_surface(dim, m, seed)?)))
        }
        Gen::Polyhedron { height, m, out_dir } => {
            let pair = dodecahedron_bump_pair(&rational(&height)?, m)?;
            decorated("dodecahedron", &pair, out_dir.as_deref())
        }
        Gen::Lobetree { matrix } => {
            if matrix.len() != 9 {
                bail!("--matrix takes 9 comma-separated counts, got {}", matrix.len());
            }
            let m = [[matrix[0], matrix[1], matrix[2]], [matrix[3], matrix[4], matrix[5]], [matrix[6], matrix[7], matrix[8]]];
            Ok(Outcome::json(lobe_tree(m)?.graph.to_json()))
        }
        Gen::Gluetree { s, t, leaf, delta } => {
            let s = MetricGraph::from_json(&read_json(&s)?)?;
            let t = MetricGraph::from_json(&read_json(&t)?)?;
            Ok(Outcome::json(glue_tree(&s, leaf, &t, &rational(&delta)?)?.graph.to_json()))
        }
        Gen::Randomtree { max_edges, extra_edges } => {
            let mut rng = ChaCha8Rng::seed_from_u64(require_seed(g)?);
            let graph = if extra_edges == 0 { random_tree(&mut rng, max_edges) } else { random_graph(&mut rng, max_edges, extra_edges) };
            Ok(Outcome::json(graph.to_json()))
        }
    }
}
