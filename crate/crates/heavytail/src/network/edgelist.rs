//! Edge-list ingestion and degree extraction for network datasets.
//!
//! Files are read line by line: comment lines and an optional fixed-size
//! header are skipped, the first two integer columns of each remaining line
//! are the edge endpoints, and any further columns (weights, timestamps) are
//! ignored. Node labels are remapped to dense indices in order of first
//! appearance; the original labels stay available through
//! [`Graph::original_id`].

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::distributions::SampleSet;
use crate::error::{Error, Result};
use crate::network::{Graph, NodeId};
use crate::scalar::Real;

/// Parsing rules for [`load_edge_list`].
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Keep edge direction; the adjacency lists then hold out-neighbors.
    pub directed: bool,
    /// Two-mode data: the two columns index disjoint node sets, so equal
    /// labels in different columns are different nodes.
    pub bipartite: bool,
    /// Drop edges whose endpoints coincide (counted in the stats).
    pub drop_self_loops: bool,
    /// Lines starting with any of these (after trimming) are skipped.
    pub comment_prefixes: Vec<String>,
    /// Unconditionally skip this many lines at the top of the file.
    pub skip_header_lines: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            directed: false,
            bipartite: false,
            drop_self_loops: true,
            comment_prefixes: vec!["#".to_string(), "%".to_string()],
            skip_header_lines: 0,
        }
    }
}

/// Bookkeeping from one ingestion run.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IngestStats {
    pub lines_read: u64,
    /// Lines that yielded an edge, before dedup and self-loop removal.
    pub edges_parsed: u64,
    pub self_loops_dropped: u64,
    /// Repeated edges collapsed into one adjacency entry. For undirected
    /// graphs `(u, v)` and `(v, u)` are the same edge.
    pub duplicates_collapsed: u64,
    pub n_nodes: usize,
    pub n_edges: usize,
}

/// An ingested graph together with its parse statistics.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub stats: IngestStats,
}

/// Read an edge list from a file. See [`read_edge_list`] for the format.
pub fn load_edge_list<P: AsRef<Path>>(path: P, options: &LoadOptions) -> Result<LoadedGraph> {
    let file = File::open(path.as_ref())?;
    read_edge_list(BufReader::new(file), options)
}

/// Read an edge list from any reader.
///
/// Fields may be separated by whitespace, commas, or semicolons. A line with
/// fewer than two integer fields is a parse error reported with its 1-based
/// line number.
pub fn read_edge_list<R: Read>(reader: R, options: &LoadOptions) -> Result<LoadedGraph> {
    let mut lines_read = 0u64;
    let mut edges_parsed = 0u64;
    let mut self_loops_dropped = 0u64;

    // Dense remap per side. Unipartite input uses only the left table.
    let mut left_index: HashMap<i64, u32> = HashMap::new();
    let mut left_ids: Vec<i64> = Vec::new();
    let mut right_index: HashMap<i64, u32> = HashMap::new();
    let mut right_ids: Vec<i64> = Vec::new();
    // Edges as (left local, right local) until the side offset is known.
    let mut raw_edges: Vec<(u32, u32)> = Vec::new();

    let intern = |table: &mut HashMap<i64, u32>, ids: &mut Vec<i64>, label: i64| -> u32 {
        *table.entry(label).or_insert_with(|| {
            ids.push(label);
            (ids.len() - 1) as u32
        })
    };

    for line in BufReader::new(reader).lines() {
        let line = line?;
        lines_read += 1;
        if lines_read <= options.skip_header_lines as u64 {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() || options.comment_prefixes.iter().any(|p| trimmed.starts_with(p.as_str())) {
            continue;
        }
        let mut fields = trimmed.split(|c: char| c.is_whitespace() || c == ',' || c == ';').filter(|f| !f.is_empty());
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parse { line: lines_read, reason: "expected two columns".to_string() }),
        };
        let u: i64 = a
            .parse()
            .map_err(|_| Error::Parse { line: lines_read, reason: format!("bad node label {a:?}") })?;
        let v: i64 = b
            .parse()
            .map_err(|_| Error::Parse { line: lines_read, reason: format!("bad node label {b:?}") })?;
        edges_parsed += 1;
        if options.bipartite {
            let lu = intern(&mut left_index, &mut left_ids, u);
            let rv = intern(&mut right_index, &mut right_ids, v);
            raw_edges.push((lu, rv));
        } else {
            if u == v && options.drop_self_loops {
                self_loops_dropped += 1;
                // Still intern the label so isolated self-loop nodes exist.
                intern(&mut left_index, &mut left_ids, u);
                continue;
            }
            let lu = intern(&mut left_index, &mut left_ids, u);
            let lv = intern(&mut left_index, &mut left_ids, v);
            raw_edges.push((lu, lv));
        }
    }

    let (n, edges, sides) = if options.bipartite {
        // Right-side nodes sit after the left block.
        let offset = left_ids.len() as u32;
        let n = left_ids.len() + right_ids.len();
        let edges: Vec<(NodeId, NodeId)> =
            raw_edges.iter().map(|&(l, r)| (l as NodeId, (r + offset) as NodeId)).collect();
        let mut sides = vec![0u8; n];
        for s in sides.iter_mut().skip(left_ids.len()) {
            *s = 1;
        }
        left_ids.extend_from_slice(&right_ids);
        (n, edges, Some(sides))
    } else {
        let n = left_ids.len();
        let edges: Vec<(NodeId, NodeId)> = raw_edges.iter().map(|&(u, v)| (u as NodeId, v as NodeId)).collect();
        (n, edges, None)
    };

    // Count distinct edges to report how many repeats collapsed. from_edges
    // deduplicates per adjacency list, which matches this canonical count.
    let mut canon: Vec<(NodeId, NodeId)> = edges
        .iter()
        .map(|&(u, v)| if options.directed || u <= v { (u, v) } else { (v, u) })
        .collect();
    canon.sort_unstable();
    canon.dedup();
    let duplicates_collapsed = edges.len() as u64 - canon.len() as u64;

    let graph = Graph::from_edges(n, &edges, options.directed)?.with_metadata(sides, Some(left_ids), None);
    let stats = IngestStats {
        lines_read,
        edges_parsed,
        self_loops_dropped,
        duplicates_collapsed,
        n_nodes: graph.n_nodes(),
        n_edges: graph.n_edges(),
    };
    Ok(LoadedGraph { graph, stats })
}

/// Which per-node count to extract as a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activity {
    /// Out-degree: length of the adjacency list. Equals total degree on
    /// undirected graphs.
    OutDegree,
    /// Total degree; for directed graphs in-degree plus out-degree.
    Degree,
    /// Degree restricted to the nodes of one bipartite side.
    SideDegree(u8),
}

/// Extract per-node activity counts as a sample set labeled with the
/// activity kind. Zero counts are common in sparse snapshots and usually
/// excluded before tail fitting, since the estimators work on logarithms.
pub fn node_activity<F: Real>(g: &Graph, activity: Activity, exclude_zeros: bool) -> Result<SampleSet<F>> {
    let n = g.n_nodes();
    if n == 0 {
        return Err(Error::InvalidData("empty graph".to_string()));
    }
    let (counts, label): (Vec<usize>, &str) = match activity {
        Activity::OutDegree => ((0..n).map(|u| g.degree(u as NodeId)).collect(), "out-degree"),
        Activity::Degree => {
            if g.is_directed() {
                let mut indeg = vec![0usize; n];
                for u in 0..n {
                    for &v in g.neighbors(u as NodeId) {
                        indeg[v as usize] += 1;
                    }
                }
                ((0..n).map(|u| g.degree(u as NodeId) + indeg[u]).collect(), "degree")
            } else {
                ((0..n).map(|u| g.degree(u as NodeId)).collect(), "degree")
            }
        }
        Activity::SideDegree(side) => {
            if !g.is_bipartite() {
                return Err(Error::invalid_parameter("activity", "side degrees need a bipartite graph"));
            }
            let counts: Vec<usize> =
                (0..n).filter(|&u| g.side(u as NodeId) == Some(side)).map(|u| g.degree(u as NodeId)).collect();
            if counts.is_empty() {
                return Err(Error::InvalidData(format!("no nodes on side {side}")));
            }
            (counts, "side-degree")
        }
    };
    let values: Vec<F> =
        counts.iter().filter(|&&c| !(exclude_zeros && c == 0)).map(|&c| F::of_usize(c)).collect();
    if values.is_empty() {
        return Err(Error::InvalidData("no nodes left after zero filtering".to_string()));
    }
    Ok(SampleSet::from_data(values, label))
}
