//! Sparse graphs, Erdos-Renyi generation, BFS, and value propagation.

mod edgelist;
mod values;

use std::collections::HashMap;

use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::rng::{substream, StreamClass};

pub use edgelist::{load_edge_list, node_activity, read_edge_list, Activity, IngestStats, LoadOptions, LoadedGraph};
pub use values::{
    assign_node_values, propagate, verify_distance_decorrelation, DecorrelationReport, NodeValues,
    PairDecorrelation, ZModel,
};

/// Dense node index.
pub type NodeId = u32;

/// Adjacency-list graph with sorted neighbor lists.
///
/// For directed graphs the lists hold out-neighbors. Bipartite graphs carry
/// a side label per node, and ingested graphs keep the original labels of
/// the dense indices in a side table.
#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    adj: Vec<Vec<NodeId>>,
    n_edges: usize,
    sides: Option<Vec<u8>>,
    original_ids: Option<Vec<i64>>,
    degree_cap: Option<u32>,
}

impl Graph {
    /// Build from an edge list over nodes `0..n`. Edges are deduplicated;
    /// for undirected graphs both endpoints receive the neighbor entry.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)], directed: bool) -> Result<Self> {
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidData(format!("edge ({u}, {v}) outside node range 0..{n}")));
            }
        }
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u as usize].push(v);
            if !directed && u != v {
                adj[v as usize].push(u);
            }
        }
        let mut n_edges = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        for (u, list) in adj.iter().enumerate() {
            n_edges += if directed {
                list.len()
            } else {
                // Count undirected edges once; self-loops count once.
                list.iter().filter(|&&v| v as usize >= u).count()
            };
        }
        Ok(Graph { directed, adj, n_edges, sides: None, original_ids: None, degree_cap: None })
    }

    pub fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u as usize]
    }

    /// Out-degree for directed graphs, degree for undirected ones.
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adj.is_empty() {
            return 0.0;
        }
        let total: usize = self.adj.iter().map(Vec::len).sum();
        total as f64 / self.adj.len() as f64
    }

    /// Bipartite side of a node, if side labels exist.
    pub fn side(&self, u: NodeId) -> Option<u8> {
        self.sides.as_ref().map(|s| s[u as usize])
    }

    pub fn is_bipartite(&self) -> bool {
        self.sides.is_some()
    }

    /// Original label of a dense index, for ingested graphs.
    pub fn original_id(&self, u: NodeId) -> Option<i64> {
        self.original_ids.as_ref().map(|ids| ids[u as usize])
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.degree_cap
    }

    /// FNV-1a over the canonical adjacency encoding. Identical structure
    /// (including direction and side labels) gives an identical hash
    /// however the graph was read or generated.
    pub fn structural_hash(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write_u8(self.directed as u8);
        h.write_u64(self.adj.len() as u64);
        for list in &self.adj {
            h.write_u64(list.len() as u64);
            for &v in list {
                h.write_u64(v as u64);
            }
        }
        if let Some(sides) = &self.sides {
            for &s in sides {
                h.write_u8(s);
            }
        }
        h.finish()
    }

    pub(crate) fn with_metadata(
        mut self,
        sides: Option<Vec<u8>>,
        original_ids: Option<Vec<i64>>,
        degree_cap: Option<u32>,
    ) -> Self {
        self.sides = sides;
        self.original_ids = original_ids;
        self.degree_cap = degree_cap;
        self
    }
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf29ce484222325)
    }

    fn write_u8(&mut self, b: u8) {
        self.0 ^= b as u64;
        self.0 = self.0.wrapping_mul(0x100000001b3);
    }

    fn write_u64(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.write_u8(b);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Generate an undirected Erdos-Renyi graph `G(n, p)` where each of the
/// `n (n - 1) / 2` pairs is an edge independently with probability `p`.
///
/// With a degree cap, the whole graph is regenerated from the next
/// substream until every degree is within the cap, up to 1000 attempts.
pub fn gen_erdos_renyi(n: usize, p: f64, degree_cap: Option<u32>, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid_parameter("n", "need at least 2 nodes"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid_parameter("p", format!("{p} not in (0, 1]")));
    }
    const ATTEMPT_BUDGET: u32 = 1000;
    for attempt in 0..ATTEMPT_BUDGET {
        let mut rng = substream(seed, StreamClass::Graph, attempt as u64);
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut n_edges = 0usize;
        if p == 1.0 {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        adj[i].push(j as NodeId);
                    }
                }
            }
            n_edges = n * (n - 1) / 2;
        } else {
            // Geometric skipping within each row of the upper triangle:
            // the gap to the next edge is Geometric(p).
            let skip = rand_distr::Geometric::new(p)
                .map_err(|e| Error::invalid_parameter("p", e.to_string()))?;
            for i in 0..n.saturating_sub(1) {
                let mut j = i + 1 + skip.sample(&mut rng) as usize;
                while j < n {
                    adj[i].push(j as NodeId);
                    adj[j].push(i as NodeId);
                    n_edges += 1;
                    j += 1 + skip.sample(&mut rng) as usize;
                }
            }
        }
        if let Some(cap) = degree_cap {
            if adj.iter().any(|list| list.len() > cap as usize) {
                continue;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        return Ok(Graph {
            directed: false,
            adj,
            n_edges,
            sides: None,
            original_ids: None,
            degree_cap,
        });
    }
    Err(Error::DegreeCapExhausted { cap: degree_cap.unwrap_or(0), attempts: ATTEMPT_BUDGET })
}

/// BFS distances from `source`, following edge direction on directed
/// graphs. Nodes beyond `cutoff` (when given) and unreachable nodes are
/// absent from the map.
pub fn bfs_distances(g: &Graph, source: NodeId, cutoff: Option<u32>) -> Result<HashMap<NodeId, u32>> {
    if source as usize >= g.n_nodes() {
        return Err(Error::invalid_parameter("source", format!("node {source} outside 0..{}", g.n_nodes())));
    }
    let mut dist = HashMap::new();
    dist.insert(source, 0);
    let mut frontier = std::collections::VecDeque::new();
    frontier.push_back(source);
    while let Some(u) = frontier.pop_front() {
        let du = dist[&u];
        if let Some(c) = cutoff {
            if du >= c {
                continue;
            }
        }
        for &v in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(du + 1);
                frontier.push_back(v);
            }
        }
    }
    Ok(dist)
}
