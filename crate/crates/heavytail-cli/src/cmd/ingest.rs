//! `ingest`: load an edge list, pick a node activity measure, and report
//! its summary statistics.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use heavytail::moments::{summarize, LimitKind, MomentRequest};
use heavytail::network::{load_edge_list, node_activity, Activity, LoadOptions};
use heavytail::Result;
use serde::Serialize;

use crate::config::Context;
use crate::{emit, sample_file};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// SNAP edge lists: whitespace separated, `#` comments, directed.
    Snap,
    /// KONECT edge lists: `%` headers, undirected unless --directed.
    Konect,
    /// Anything else: `#` or `%` comments, undirected unless --directed.
    Plain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActivityKind {
    /// Adjacency-list length: out-degree when directed, degree otherwise.
    OutDegree,
    /// Total degree (in plus out when directed).
    Degree,
    /// Degree restricted to the first bipartite side.
    LeftDegree,
    /// Degree restricted to the second bipartite side.
    RightDegree,
}

#[derive(Args, Serialize)]
pub struct IngestArgs {
    /// Edge-list file.
    pub input: PathBuf,

    #[arg(long, value_enum, default_value = "snap")]
    pub format: Format,

    /// Keep edge direction regardless of the format default.
    #[arg(long, conflicts_with = "undirected")]
    pub directed: bool,

    /// Ignore edge direction regardless of the format default.
    #[arg(long)]
    pub undirected: bool,

    /// Two-mode data: the two columns index disjoint node sets.
    #[arg(long)]
    pub bipartite: bool,

    /// Keep self-loops instead of dropping them.
    #[arg(long)]
    pub keep_self_loops: bool,

    /// Unconditionally skip this many lines at the top of the file.
    #[arg(long, default_value_t = 0)]
    pub skip_header: usize,

    /// Node activity measure to summarize.
    #[arg(long, value_enum, default_value = "out-degree")]
    pub activity: ActivityKind,

    /// Drop nodes whose activity is zero before summarizing.
    #[arg(long)]
    pub filter_zero_outdegree: bool,

    /// Write the activity values as a sample file.
    #[arg(long)]
    pub values_out: Option<PathBuf>,

    /// Summary report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn run(_ctx: &Context, a: &IngestArgs) -> Result<()> {
    let comment_prefixes: Vec<String> = match a.format {
        Format::Snap => vec!["#".to_string()],
        Format::Konect | Format::Plain => vec!["%".to_string(), "#".to_string()],
    };
    let directed = if a.directed {
        true
    } else if a.undirected {
        false
    } else {
        a.format == Format::Snap
    };
    let options = LoadOptions {
        directed,
        bipartite: a.bipartite,
        drop_self_loops: !a.keep_self_loops,
        comment_prefixes,
        skip_header_lines: a.skip_header,
    };
    let loaded = load_edge_list(&a.input, &options)?;

    let activity = match a.activity {
        ActivityKind::OutDegree => Activity::OutDegree,
        ActivityKind::Degree => Activity::Degree,
        ActivityKind::LeftDegree => Activity::SideDegree(0),
        ActivityKind::RightDegree => Activity::SideDegree(1),
    };
    let values = node_activity::<f64>(&loaded.graph, activity, a.filter_zero_outdegree)?;
    let summary = summarize(&values.values, &MomentRequest::for_kind(LimitKind::Variance))?;
    let max = values.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut out = emit::OutputSet::new();
    if let Some(path) = &a.values_out {
        out.stage(path, &sample_file::to_bytes(&values, "node activity")?)?;
    }

    let result = serde_json::json!({
        "summary": {
            "n": summary.n,
            "max": max,
            "mean": summary.mean(),
            "variance": summary.variance()?,
        },
        "stats": loaded.stats,
        "directed": directed,
    });
    let report = emit::envelope("ingest", None, a, &result)?;
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
