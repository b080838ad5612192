//! Node values: propagation, seeded assignment, and decorrelation checks.

use rand::{Rng, RngExt};
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

use super::{bfs_distances, Graph, NodeId};
use crate::distributions::TailModel;
use crate::error::{Error, Result};
use crate::rng::{substream, StreamClass};
use crate::scalar::Real;

/// Law of the per-node seeds `Z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ZModel<F> {
    /// Heavy-tailed seeds.
    Tail(TailModel<F>),
    /// Unit exponential seeds; finite variance, so node covariances exist
    /// and decorrelation can be measured.
    UnitExponential,
}

impl<F: Real> ZModel<F> {
    fn sample_into<R: Rng>(&self, n: usize, rng: &mut R, out: &mut Vec<F>) -> Result<()> {
        match self {
            ZModel::Tail(model) => model.sample_into(n, rng, out),
            ZModel::UnitExponential => {
                out.reserve(n);
                for _ in 0..n {
                    let e: f64 = rand_distr::Exp1.sample(rng);
                    out.push(F::of(e));
                }
                Ok(())
            }
        }
    }
}

/// Values attached to graph nodes, with their generating model and seeds
/// recorded.
#[derive(Debug, Clone, Serialize)]
pub struct NodeValues<F> {
    pub values: Vec<F>,
    pub model: ZModel<F>,
    pub seed: u64,
    pub replicate_id: u64,
}

/// Propagation rule: each node's value is its own seed plus the mean of
/// its neighbors' seeds; isolated nodes keep their seed.
pub fn propagate<F: Real>(g: &Graph, z: &[F]) -> Vec<F> {
    assert_eq!(z.len(), g.n_nodes(), "one seed per node");
    let mut out = Vec::with_capacity(z.len());
    for u in 0..z.len() {
        let neighbors = g.neighbors(u as NodeId);
        let mut x = z[u];
        if !neighbors.is_empty() {
            let mut s = F::zero();
            for &v in neighbors {
                s += z[v as usize];
            }
            x = x + s / F::of_usize(neighbors.len());
        }
        out.push(x);
    }
    out
}

/// Draw node seeds from `model` on substream `(seed, replicate_id)` and
/// propagate them over the graph.
pub fn assign_node_values<F: Real>(
    g: &Graph,
    model: &ZModel<F>,
    seed: u64,
    replicate_id: u64,
) -> Result<NodeValues<F>> {
    let mut rng = substream(seed, StreamClass::NodeValues, replicate_id);
    let mut z = Vec::new();
    model.sample_into(g.n_nodes(), &mut rng, &mut z)?;
    Ok(NodeValues { values: propagate(g, &z), model: model.clone(), seed, replicate_id })
}

/// Monte Carlo covariance of one node pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairDecorrelation<F> {
    pub u: NodeId,
    pub v: NodeId,
    pub distance: u32,
    pub covariance: F,
    /// Standard error of the covariance estimate across replicates.
    pub se: F,
}

/// Decorrelation report over sampled node pairs grouped by graph distance.
#[derive(Debug, Clone, Serialize)]
pub struct DecorrelationReport<F> {
    pub pairs: Vec<PairDecorrelation<F>>,
    pub replicates: usize,
}

impl<F: Real> DecorrelationReport<F> {
    /// Pairs at exactly the given distance.
    pub fn pairs_at(&self, distance: u32) -> impl Iterator<Item = &PairDecorrelation<F>> {
        self.pairs.iter().filter(move |p| p.distance == distance)
    }
}

/// Estimate node-pair covariances under repeated seed draws.
///
/// Samples `pairs_per_class` node pairs at distances 1, 2, and 3, redraws
/// the node seeds `replicates` times on the fixed graph, and reports each
/// pair's covariance with its Monte Carlo standard error. Values at
/// distance >= 3 share no seed terms under the propagation rule, so their
/// covariance is structurally zero; distance-3 pairs are the boundary case.
pub fn verify_distance_decorrelation<F: Real>(
    g: &Graph,
    model: &ZModel<F>,
    pairs_per_class: usize,
    replicates: usize,
    seed: u64,
) -> Result<DecorrelationReport<F>> {
    if pairs_per_class == 0 {
        return Err(Error::invalid_parameter("pairs_per_class", "must be positive"));
    }
    if replicates < 8 {
        return Err(Error::invalid_parameter("replicates", "need at least 8 replicates"));
    }
    let pairs = choose_pairs(g, pairs_per_class, seed)?;
    let nodes: Vec<NodeId> = {
        let mut v: Vec<NodeId> = pairs.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let node_pos: std::collections::HashMap<NodeId, usize> =
        nodes.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    // One row of tracked node values per replicate; substreams make the
    // result independent of the parallel schedule.
    let rows: Vec<Result<Vec<F>>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let assigned = assign_node_values(g, model, seed, r as u64)?;
            Ok(nodes.iter().map(|&u| assigned.values[u as usize]).collect())
        })
        .collect();
    let mut tracked = Vec::with_capacity(replicates);
    for row in rows {
        tracked.push(row?);
    }

    let rf = F::of_usize(replicates);
    let means: Vec<F> = (0..nodes.len())
        .map(|i| crate::sum::kbn_sum(tracked.iter().map(|row| row[i])) / rf)
        .collect();
    let mut out = Vec::with_capacity(pairs.len());
    for &(u, v, distance) in &pairs {
        let iu = node_pos[&u];
        let iv = node_pos[&v];
        let products: Vec<F> =
            tracked.iter().map(|row| (row[iu] - means[iu]) * (row[iv] - means[iv])).collect();
        let sum = crate::sum::kbn_sum(products.iter().copied());
        let cov = sum / F::of_usize(replicates - 1);
        let mean_prod = sum / rf;
        let var_prod =
            crate::sum::kbn_sum_by(&products, |p| (p - mean_prod) * (p - mean_prod)) / F::of_usize(replicates - 1);
        let se = (var_prod / rf).sqrt();
        out.push(PairDecorrelation { u, v, distance, covariance: cov, se });
    }
    Ok(DecorrelationReport { pairs: out, replicates })
}

/// Deterministically sample `per_class` unordered pairs at distances 1, 2,
/// and 3 by BFS from randomly chosen sources.
fn choose_pairs(g: &Graph, per_class: usize, seed: u64) -> Result<Vec<(NodeId, NodeId, u32)>> {
    let n = g.n_nodes();
    if n < 4 {
        return Err(Error::InvalidData("graph too small to sample distance classes".into()));
    }
    let mut rng = substream(seed, StreamClass::PairChoice, 0);
    let mut chosen: Vec<(NodeId, NodeId, u32)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut counts = [0usize; 3];
    // Spread pairs over at least four BFS sources per class.
    let per_source = per_class.div_ceil(4);
    let budget = 50 * per_class.max(8);
    for _ in 0..budget {
        if counts.iter().all(|&c| c >= per_class) {
            break;
        }
        let source = rng.random_range(0..n) as NodeId;
        let dist = bfs_distances(g, source, Some(3))?;
        // Bucket in deterministic order: sort by node id.
        let mut items: Vec<(NodeId, u32)> = dist.into_iter().filter(|&(_, d)| d >= 1).collect();
        items.sort_unstable();
        let mut taken = [0usize; 3];
        for (v, d) in items {
            let class = (d - 1) as usize;
            if counts[class] >= per_class || taken[class] >= per_source {
                continue;
            }
            let key = (source.min(v), source.max(v));
            if seen.insert(key) {
                chosen.push((key.0, key.1, d));
                counts[class] += 1;
                taken[class] += 1;
            }
        }
    }
    if counts.iter().any(|&c| c < per_class) {
        return Err(Error::InvalidData(format!(
            "could not find {per_class} pairs per distance class (found {counts:?}); graph too small, dense, or disconnected"
        )));
    }
    Ok(chosen)
}
