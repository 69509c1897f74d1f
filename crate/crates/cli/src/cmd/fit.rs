use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use gromon_shapes::fit_taylor_coeffs;
use serde_json::json;

use crate::io::read_text;
use crate::{Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum Fit {
    /// Least-squares power series Σ c_k r^k through (r, H(r)) rows.
    Taylor {
        /// CSV with columns r and H; a header row is skipped.
        csv: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,3")]
        degrees: Vec<u32>,
        /// Only rows with r in (0, window] are used.
        #[arg(long, default_value_t = 0.3)]
        window: f64,
    },
}

fn read_rows(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            bail!("row {} has fewer than two columns", k + 1);
        }
        match (rec[0].trim().parse::<f64>(), rec[1].trim().parse::<f64>()) {
            (Ok(r), Ok(h)) => rows.push((r, h)),
            _ if k == 0 => continue,
            _ => bail!("row {} is not numeric: {:?}", k + 1, rec),
        }
    }
    Ok(rows)
}

pub fn run(cmd: Fit, _g: &Global) -> Result<Outcome> {
    match cmd {
        Fit::Taylor { csv, degrees, window } => {
            let rows = read_rows(&read_text(&csv)?).with_context(|| format!("reading {}", csv.display()))?;
            let f = fit_taylor_coeffs(&rows, &degrees, window)?;
            Ok(Outcome::json(json!({
                "degrees": f.degrees,
                "coeffs": f.coeffs,
                "std_errors": f.std_errors,
                "residual": f.residual,
                "points": f.points,
                "window": window,
            })))
        }
    }
}
