//! `simulate`: draw a sample and write it as a sample file.

use std::path::PathBuf;

use clap::Args;
use heavytail::distributions::{sample_process, sample_stable_one_sided};
use heavytail::Result;
use serde::Serialize;

use crate::args::ProcessArgs;
use crate::config::Context;
use crate::{emit, sample_file};

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub process: ProcessArgs,

    /// Observations to draw.
    #[arg(long)]
    pub n: usize,

    /// Replicate index; distinct values give independent streams under the
    /// same seed.
    #[arg(long, default_value_t = 0)]
    pub replicate: u64,

    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(ctx: &Context, a: &SimulateArgs) -> Result<()> {
    ctx.echo_seed();
    let set = if a.process.wants_stable() {
        let scale = a.process.margin.stable_scale.unwrap_or(1.0);
        sample_stable_one_sided(a.process.margin.alpha, scale, a.n, ctx.seed, a.replicate)?
    } else {
        let spec = a.process.build_spec()?;
        sample_process(&spec, a.n, ctx.seed, a.replicate)?
    };
    let bytes = sample_file::to_bytes(&set, "simulated sample")?;
    match &a.output {
        Some(path) => {
            let mut out = emit::OutputSet::new();
            out.stage(path, &bytes)?;
            out.commit()
        }
        None => emit::to_stdout(&bytes),
    }
}
