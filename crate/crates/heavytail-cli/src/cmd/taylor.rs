//! `taylor`: log-log regression of subsample variance against subsample
//! mean over a log-spaced size grid.

use std::path::PathBuf;

use clap::Args;
use heavytail::analysis::{log_spaced_sizes, taylor_points_in_base, TaylorRegression};
use heavytail::Result;
use serde::Serialize;

use crate::config::Context;
use crate::{emit, sample_file};

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct TaylorArgs {
    /// Input sample file (one value per line, `#` lines skipped).
    #[arg(long)]
    pub input: PathBuf,

    /// Smallest subsample size of the grid.
    #[arg(long, default_value_t = 500)]
    pub min_size: usize,

    /// Number of grid sizes.
    #[arg(long, default_value_t = 100)]
    pub count: usize,

    /// Largest subsample size; the full sample when omitted.
    #[arg(long)]
    pub max_size: Option<usize>,

    /// Base of the logs in the points and the regression.
    #[arg(long, default_value_t = 10.0)]
    pub log_base: f64,

    /// Where to write the size,log_mean,log_variance points.
    #[arg(long)]
    pub points_csv: Option<PathBuf>,

    /// Regression report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn run(ctx: &Context, a: &TaylorArgs) -> Result<()> {
    ctx.echo_seed();
    let data = sample_file::read(&a.input)?;
    let max = a.max_size.unwrap_or(data.len());
    let sizes = log_spaced_sizes(a.min_size, max, a.count)?;
    let points = taylor_points_in_base(&data, &sizes, ctx.seed, a.log_base)?;
    let regression = points.fit()?;

    let mut out = emit::OutputSet::new();
    if let Some(path) = &a.points_csv {
        let rows: Vec<Vec<String>> = regression
            .points
            .iter()
            .map(|p| vec![p.size.to_string(), emit::num(p.log_mean), emit::num(p.log_variance)])
            .collect();
        let csv = emit::csv_bytes(&["size", "log_mean", "log_variance"], &rows)?;
        out.stage(path, &csv)?;
    }

    let result = report_body(&regression, points.skipped_zero_variance);
    let report = emit::envelope("taylor", Some(ctx.seed), a, &result)?;
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

fn report_body(r: &TaylorRegression<f64>, skipped: usize) -> serde_json::Value {
    let interval = |ci: (f64, f64)| serde_json::json!([ci.0, ci.1]);
    serde_json::json!({
        "slope": r.slope,
        "intercept": r.intercept,
        "ci95": { "slope": interval(r.slope_ci95), "intercept": interval(r.intercept_ci95) },
        "ci99": { "slope": interval(r.slope_ci99), "intercept": interval(r.intercept_ci99) },
        "r2": r.r_squared,
        "adj_r2": r.adj_r_squared,
        "implied_alpha": r.implied_alpha,
        "n_points": r.n_points,
        "log_base": r.log_base,
        "skipped_zero_variance": skipped,
        "points": r.points,
    })
}
