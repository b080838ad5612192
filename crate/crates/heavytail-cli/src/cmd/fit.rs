//! `fit`: parametric tail fits on an ingested or simulated sample.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use heavytail::tailfit::{fit_gpd_mle, fit_negbinomial, fit_pareto_ls};
use heavytail::Result;
use serde::Serialize;

use crate::args::bad;
use crate::config::Context;
use crate::{emit, sample_file};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Least squares on the log-log empirical survival curve.
    ParetoLs,
    /// Generalized Pareto over a threshold, by maximum likelihood.
    Gpd,
    /// Negative binomial for discrete activity data.
    NegBinomial,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    /// Input sample file.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum)]
    pub family: Family,

    /// Exceedance threshold for --family gpd.
    #[arg(long)]
    pub threshold: Option<f64>,

    /// Fit report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn run(_ctx: &Context, a: &FitArgs) -> Result<()> {
    if a.threshold.is_some() && a.family != Family::Gpd {
        return Err(bad("threshold", "only meaningful for --family gpd"));
    }
    let data = sample_file::read(&a.input)?;
    let fit = match a.family {
        Family::ParetoLs => fit_pareto_ls(&data)?,
        Family::Gpd => {
            let threshold =
                a.threshold.ok_or_else(|| bad("threshold", "required for --family gpd"))?;
            fit_gpd_mle(&data, threshold)?
        }
        Family::NegBinomial => fit_negbinomial(&data)?,
    };

    let result = serde_json::json!({ "n": data.len(), "fit": fit });
    let report = emit::envelope("fit", None, a, &result)?;
    match &a.report {
        Some(path) => {
            let mut out = emit::OutputSet::new();
            out.stage(path, &report)?;
            out.commit()
        }
        None => emit::to_stdout(&report),
    }
}
