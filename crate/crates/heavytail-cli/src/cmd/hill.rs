//! `hill`: alternative Hill plot over a theta grid, `k = ceil(n^theta)`.

use std::path::PathBuf;

use clap::Args;
use heavytail::tailfit::alt_hill_curve;
use heavytail::{Error, Result};
use serde::Serialize;

use crate::config::Context;
use crate::{emit, sample_file};

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct HillArgs {
    /// Input sample file.
    #[arg(long)]
    pub input: PathBuf,

    /// Grid `start:end:step` of exponents theta in (0, 1].
    #[arg(long, default_value = "0.5:0.95:0.01")]
    pub theta_grid: String,

    /// Bootstrap replicates for the confidence bands; 0 disables them.
    #[arg(long, default_value_t = 500)]
    pub bootstrap: usize,

    /// Confidence level of the bands.
    #[arg(long, default_value_t = 0.99)]
    pub level: f64,

    /// Where to write theta,k,hill,smoothed,ci_low,ci_high rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Curve report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Parse `start:end:step` into an inclusive ascending grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let invalid = |reason: String| Error::InvalidParameter { name: "theta_grid", reason };
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, step] = parts[..] else {
        return Err(invalid(format!("`{text}` is not start:end:step")));
    };
    let parse = |s: &str| {
        s.parse::<f64>().map_err(|_| invalid(format!("`{s}` is not a number")))
    };
    let (start, end, step) = (parse(start)?, parse(end)?, parse(step)?);
    if !(step > 0.0) {
        return Err(invalid(format!("step {step} must be positive")));
    }
    if end < start {
        return Err(invalid(format!("end {end} below start {start}")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

pub fn run(ctx: &Context, a: &HillArgs) -> Result<()> {
    if a.bootstrap > 0 {
        ctx.echo_seed();
    }
    let data = sample_file::read(&a.input)?;
    let thetas = parse_grid(&a.theta_grid)?;
    let curve = alt_hill_curve(&data, &thetas, a.bootstrap, a.level, ctx.seed)?;

    let mut out = emit::OutputSet::new();
    if let Some(path) = &a.csv {
        let rows: Vec<Vec<String>> = (0..curve.thetas.len())
            .map(|i| {
                vec![
                    emit::num(curve.thetas[i]),
                    curve.ks[i].to_string(),
                    emit::opt_num(curve.estimates[i]),
                    emit::opt_num(curve.smoothed[i]),
                    emit::opt_num(curve.ci_low[i]),
                    emit::opt_num(curve.ci_high[i]),
                ]
            })
            .collect();
        let csv =
            emit::csv_bytes(&["theta", "k", "hill", "smoothed", "ci_low", "ci_high"], &rows)?;
        out.stage(path, &csv)?;
    }

    let seed = (a.bootstrap > 0).then_some(ctx.seed);
    let result = serde_json::json!({ "bootstrap": a.bootstrap, "curve": curve });
    let report = emit::envelope("hill", seed, a, &result)?;
    match &a.report {
        Some(path) => {
            out.stage(path, &report)?;
            out.commit()
        }
        None => {
            out.commit()?;
            emit::to_stdout(&report)
        }
    }
}
