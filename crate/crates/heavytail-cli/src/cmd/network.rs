//! `network`: generate an Erdos-Renyi graph, propagate node values, and
//! optionally measure covariance decay by graph distance.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use heavytail::distributions::{EdgeProb, GraphParams};
use heavytail::network::{
    assign_node_values, gen_erdos_renyi, verify_distance_decorrelation, ZModel,
};
use heavytail::distributions::SampleSet;
use heavytail::{Result, TailModel64};
use serde::Serialize;

use crate::args::bad;
use crate::config::Context;
use crate::{emit, sample_file};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZKind {
    /// Unit exponential seeds (finite variance, good for covariance checks).
    Exponential,
    /// Pareto seeds with tail index --alpha.
    Pareto,
    /// Log-corrected Pareto seeds with tail index --alpha.
    LogCorrected,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct NetworkArgs {
    /// Node count.
    #[arg(long)]
    pub nodes: usize,

    /// Target mean degree; the edge probability is mean_degree/(nodes-1).
    #[arg(long, default_value_t = 10.0)]
    pub mean_degree: f64,

    /// Hard per-node degree cap; the graph is redrawn until it holds.
    #[arg(long)]
    pub degree_cap: Option<u32>,

    /// Seed distribution for the node values.
    #[arg(long, value_enum, default_value = "exponential")]
    pub z_dist: ZKind,

    /// Tail index for a heavy-tailed --z-dist.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Support start for --z-dist pareto.
    #[arg(long, default_value_t = 1.0)]
    pub x_min: f64,

    /// Replicate index for the node-value draw.
    #[arg(long, default_value_t = 0)]
    pub replicate: u64,

    /// Write the propagated node values as a sample file.
    #[arg(long)]
    pub values_out: Option<PathBuf>,

    /// Graph report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Measure covariance by graph distance into this CSV (slow: redraws
    /// node values --replicates times).
    #[arg(long)]
    pub decorrelation_csv: Option<PathBuf>,

    /// Sampled node pairs per distance class for the decorrelation check.
    #[arg(long, default_value_t = 30)]
    pub pairs_per_class: usize,

    /// Node-value replicates for the decorrelation check.
    #[arg(long, default_value_t = 200)]
    pub replicates: usize,
}

fn z_model(a: &NetworkArgs) -> Result<ZModel<f64>> {
    match a.z_dist {
        ZKind::Exponential => {
            if a.alpha.is_some() {
                return Err(bad("alpha", "only meaningful for a heavy-tailed --z-dist"));
            }
            Ok(ZModel::UnitExponential)
        }
        ZKind::Pareto => {
            let alpha = a.alpha.ok_or_else(|| bad("alpha", "required for --z-dist pareto"))?;
            Ok(ZModel::Tail(TailModel64::pareto(a.x_min, alpha)?))
        }
        ZKind::LogCorrected => {
            let alpha =
                a.alpha.ok_or_else(|| bad("alpha", "required for --z-dist log-corrected"))?;
            Ok(ZModel::Tail(TailModel64::log_corrected(alpha)?))
        }
    }
}

pub fn run(ctx: &Context, a: &NetworkArgs) -> Result<()> {
    ctx.echo_seed();
    let params = GraphParams::ErdosRenyi {
        edge_prob: EdgeProb::MeanDegree(a.mean_degree),
        degree_cap: a.degree_cap,
    };
    let (p, cap) = params.resolve(a.nodes)?;
    let graph = gen_erdos_renyi(a.nodes, p, cap, ctx.seed)?;
    let model = z_model(a)?;
    let values = assign_node_values(&graph, &model, ctx.seed, a.replicate)?;

    let mut out = emit::OutputSet::new();
    if let Some(path) = &a.values_out {
        let mut set = SampleSet::from_data(values.values.clone(), "network node values");
        set.seed = ctx.seed;
        set.replicate_id = a.replicate;
        out.stage(path, &sample_file::to_bytes(&set, "network node values")?)?;
    }

    let decorrelation = match &a.decorrelation_csv {
        Some(path) => {
            let check = verify_distance_decorrelation(
                &graph,
                &model,
                a.pairs_per_class,
                a.replicates,
                ctx.seed,
            )?;
            let rows: Vec<Vec<String>> = check
                .pairs
                .iter()
                .map(|pair| {
                    vec![
                        pair.u.to_string(),
                        pair.v.to_string(),
                        pair.distance.to_string(),
                        emit::num(pair.covariance),
                        emit::num(pair.se),
                    ]
                })
                .collect();
            let csv = emit::csv_bytes(&["u", "v", "distance", "covariance", "se"], &rows)?;
            out.stage(path, &csv)?;
            serde_json::json!({ "replicates": check.replicates, "pairs": check.pairs.len() })
        }
        None => serde_json::Value::Null,
    };

    let result = serde_json::json!({
        "nodes": graph.n_nodes(),
        "edges": graph.n_edges(),
        "mean_degree": graph.mean_degree(),
        "max_degree": graph.max_degree(),
        "edge_prob": p,
        "degree_cap": cap,
        "structural_hash": format!("{:016x}", graph.structural_hash()),
        "n_values": values.values.len(),
        "decorrelation": decorrelation,
    });
    let report = emit::envelope("network", Some(ctx.seed), a, &result)?;
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
