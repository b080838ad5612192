//! `probe`: estimate the normalized covariance sum of the truncated
//! process across a size grid and judge whether it vanishes.

use std::path::PathBuf;

use clap::Args;
use heavytail::asymptotics::{condition_a_probe_with, CSequence};
use heavytail::{Error, Result};
use serde::Serialize;

use crate::args::ProcessArgs;
use crate::config::Context;
use crate::emit;

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ProbeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub process: ProcessArgs,

    /// Truncated-moment order; must exceed the tail index.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,

    /// Comma-separated, strictly increasing sample sizes.
    #[arg(long, default_value = "100,1000,10000")]
    pub n_grid: String,

    /// Replicates per grid size.
    #[arg(long, default_value_t = 64)]
    pub replicates: usize,

    /// Threshold-rate rule: `log` for log n, or `log-pow:Q` for (log n)^Q.
    #[arg(long, default_value = "log")]
    pub c_rule: String,

    /// Where to write n,c_n,v_n,estimate,se,ratio,ratio_se rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Probe report with the trend verdict; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_n_grid(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| Error::InvalidParameter {
                name: "n_grid",
                reason: format!("`{s}` is not a size"),
            })
        })
        .collect()
}

fn parse_c_rule(text: &str) -> Result<CSequence<f64>> {
    let invalid = |reason: String| Error::InvalidParameter { name: "c_rule", reason };
    match text {
        "log" => Ok(CSequence::LogN),
        _ => match text.strip_prefix("log-pow:") {
            Some(q) => {
                let q = q.parse::<f64>().map_err(|_| invalid(format!("`{q}` is not a power")))?;
                Ok(CSequence::LogPow { q })
            }
            None => Err(invalid(format!("`{text}` is not `log` or `log-pow:Q`"))),
        },
    }
}

pub fn run(ctx: &Context, a: &ProbeArgs) -> Result<()> {
    ctx.echo_seed();
    let spec = a.process.build_spec()?;
    let n_grid = parse_n_grid(&a.n_grid)?;
    let c_rule = parse_c_rule(&a.c_rule)?;
    let probe = condition_a_probe_with(&spec, a.p, &c_rule, &n_grid, a.replicates, ctx.seed)?;

    let mut out = emit::OutputSet::new();
    if let Some(path) = &a.csv {
        let rows: Vec<Vec<String>> = probe
            .points
            .iter()
            .map(|pt| {
                vec![
                    pt.n.to_string(),
                    emit::num(pt.c_n),
                    emit::num(pt.v_n),
                    emit::num(pt.estimate),
                    emit::num(pt.se),
                    emit::num(pt.ratio),
                    emit::num(pt.ratio_se),
                ]
            })
            .collect();
        let csv = emit::csv_bytes(
            &["n", "c_n", "v_n", "estimate", "se", "ratio", "ratio_se"],
            &rows,
        )?;
        out.stage(path, &csv)?;
    }

    let report = emit::envelope("probe", Some(ctx.seed), a, &probe)?;
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
