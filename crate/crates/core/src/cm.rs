// SPDX-License-Identifier: Apache-2.0

//! The Connectivity Modifier pipeline.
//!
//! 1. Cluster the graph (or take a given clustering).
//! 2. Drop clusters smaller than `B` and clusters that induce trees.
//! 3. For each remaining cluster: peel nodes of degree at most `t(n)`;
//!    stop if fewer than `B` nodes are left; if the minimum cut exceeds
//!    `t(n)` keep the cluster, otherwise delete the cut edges, re-cluster
//!    each side and recurse on every resulting cluster.
//! 4. Drop results smaller than `B`.
//!
//! Every output cluster is a subset of one input cluster, has at least `B`
//! nodes and a minimum cut strictly above `t(n)`. `t` is re-evaluated at the
//! current size on every peeling round and every recursion step.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{run_clusterer, Clustering, ClustererConfig, ClustererKind};
use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, induced_subgraph_mapped, is_tree, Graph, NodeId, NodeSet};
use crate::mincut::global_min_cut;
use crate::wellconn::ThresholdFn;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmParams {
    /// Minimum cluster size `B`.
    pub min_size: usize,
    pub threshold: ThresholdFn,
    /// Used for stage 1 and for re-clustering in stage 3. An external
    /// clustering re-clusters each piece as a single cluster.
    pub clusterer: ClustererConfig,
    /// Optional bound on recursion depth; `None` is unbounded (recursion
    /// always terminates because every level removes nodes).
    pub max_depth: Option<usize>,
}

impl Default for CmParams {
    fn default() -> Self {
        CmParams {
            min_size: 11,
            threshold: ThresholdFn::Log10,
            clusterer: ClustererConfig::cpm(0.01, 0),
            max_depth: None,
        }
    }
}

impl CmParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_size < 1 {
            return Err(Error::InvalidArgument("B must be at least 1".into()));
        }
        self.threshold.validate()?;
        self.clusterer.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FateLabel {
    /// Present unchanged in the output.
    Extant,
    /// Replaced by one strictly smaller cluster.
    Reduced,
    /// Replaced by two or more clusters.
    Split,
    /// Nothing of it survives.
    Degraded,
}

/// Percent of `total_nodes` lying in clusters with at least `min_size`
/// nodes.
pub fn node_coverage(c: &Clustering, total_nodes: usize, min_size: usize) -> Result<f64> {
    if total_nodes == 0 {
        return Err(Error::InvalidArgument("coverage of an empty node set".into()));
    }
    if min_size < 1 {
        return Err(Error::InvalidArgument("coverage min_size must be at least 1".into()));
    }
    let covered: usize = c
        .clusters()
        .iter()
        .map(|cl| cl.nodes.len())
        .filter(|&s| s >= min_size)
        .sum();
    Ok(100.0 * covered as f64 / total_nodes as f64)
}

/// Clusters removed by [`filter_stage`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FilterRemoved {
    pub small: Vec<String>,
    pub trees: Vec<String>,
}

/// Stage 2: drop clusters smaller than `B` and clusters inducing a tree.
pub fn filter_stage(
    c: &Clustering,
    g: &Graph,
    params: &CmParams,
) -> Result<(Clustering, FilterRemoved)> {
    let mut removed = FilterRemoved::default();
    let mut kept = Clustering::new(c.node_count());
    for cl in c.clusters() {
        if cl.nodes.len() < params.min_size {
            removed.small.push(cl.id.clone());
        } else if is_tree(&induced_subgraph(g, &cl.nodes)?)? {
            removed.trees.push(cl.id.clone());
        } else {
            kept.push(cl.id.clone(), cl.nodes.clone())?;
        }
    }
    Ok((kept, removed))
}

/// Repeatedly delete every node whose degree is at most `t(n)`, `n` being
/// the number of nodes still present, until no such node remains.
pub fn prune_low_degree(cluster: &Graph, t: ThresholdFn) -> NodeSet {
    let n = cluster.node_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = cluster.nodes().map(|v| cluster.degree(v)).collect();
    let mut remaining = n;
    let mut candidates: Vec<NodeId> = cluster.nodes().collect();
    let mut flagged = vec![false; n];
    while remaining > 0 && !candidates.is_empty() {
        let limit = t.eval(remaining);
        let doomed: Vec<NodeId> = candidates
            .iter()
            .copied()
            .filter(|&v| alive[v as usize] && degree[v as usize] as f64 <= limit)
            .collect();
        if doomed.is_empty() {
            break;
        }
        for &v in &doomed {
            alive[v as usize] = false;
        }
        remaining -= doomed.len();
        // t is non-decreasing, so only nodes that lost degree can newly fall
        // under the (now lower or equal) limit
        candidates.clear();
        for &v in &doomed {
            for &w in cluster.neighbors(v) {
                let wi = w as usize;
                if alive[wi] {
                    degree[wi] -= 1;
                    if !flagged[wi] {
                        flagged[wi] = true;
                        candidates.push(w);
                    }
                }
            }
        }
        for &w in &candidates {
            flagged[w as usize] = false;
        }
    }
    cluster.nodes().filter(|&v| alive[v as usize]).collect()
}

/// Counters collected while running stage 3.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CmStats {
    pub mincut_calls: usize,
    pub cuts_removed: usize,
    pub reclusterings: usize,
    pub pruned_nodes: usize,
    pub max_depth: usize,
}

impl CmStats {
    fn merge(&mut self, other: &CmStats) {
        self.mincut_calls += other.mincut_calls;
        self.cuts_removed += other.cuts_removed;
        self.reclusterings += other.reclusterings;
        self.pruned_nodes += other.pruned_nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for re-clustering a piece: a function of the root seed and the
/// piece's member labels only.
fn derive_seed(root: u64, g: &Graph) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in g.nodes() {
        for b in g.label(v).bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    splitmix(root ^ splitmix(h))
}

/// Stage 3 on one cluster, given as its induced subgraph. Returned sets
/// are in the cluster's node ids, sorted by smallest member.
pub fn cm_cluster(cluster: &Graph, params: &CmParams) -> Result<Vec<NodeSet>> {
    cm_cluster_with_stats(cluster, params).map(|(sets, _)| sets)
}

pub fn cm_cluster_with_stats(
    cluster: &Graph,
    params: &CmParams,
) -> Result<(Vec<NodeSet>, CmStats)> {
    let t = params.threshold;
    let b = params.min_size;
    let mut stats = CmStats::default();
    let mut done: Vec<NodeSet> = Vec::new();
    let mut work: Vec<(NodeSet, usize)> = vec![(NodeSet::full(cluster.node_count()), 0)];

    while let Some((nodes, depth)) = work.pop() {
        if params.max_depth.is_some_and(|max| depth > max) {
            return Err(Error::RecursionDepth {
                depth,
                emitted: done.len(),
            });
        }
        stats.max_depth = stats.max_depth.max(depth);
        let sub = induced_subgraph_mapped(cluster, &nodes)?;
        let kept = prune_low_degree(&sub.graph, t);
        stats.pruned_nodes += nodes.len() - kept.len();
        if kept.len() < b.max(2) {
            continue;
        }
        let core = induced_subgraph_mapped(&sub.graph, &kept)?;
        let n = kept.len();
        let cut = global_min_cut(&core.graph)?;
        stats.mincut_calls += 1;
        let to_parent = |s: &NodeSet| sub.lift(&core.lift(s));
        if t.is_exceeded_by(cut.weight, n) {
            done.push(to_parent(&NodeSet::full(n)));
            continue;
        }

        let pieces = if cut.weight == 0 {
            connected_components(&core.graph)
        } else {
            stats.cuts_removed += 1;
            let other: NodeSet = core.graph.nodes().filter(|&v| !cut.side_a.contains(v)).collect();
            vec![cut.side_a.clone(), other]
        };
        let mut next = Vec::new();
        for piece in pieces {
            // recursion only shrinks node sets
            if piece.len() < b.max(2) {
                continue;
            }
            let piece_graph = induced_subgraph_mapped(&core.graph, &piece)?;
            match &params.clusterer.kind {
                ClustererKind::External { .. } => next.push(piece),
                _ => {
                    let config = params
                        .clusterer
                        .with_seed(derive_seed(params.clusterer.seed, &piece_graph.graph));
                    let reclustered = run_clusterer(&piece_graph.graph, &config)?;
                    stats.reclusterings += 1;
                    // nodes left unclustered are dropped
                    next.extend(
                        reclustered
                            .clusters()
                            .iter()
                            .filter(|c| c.nodes.len() >= b.max(2))
                            .map(|c| piece_graph.lift(&c.nodes)),
                    );
                }
            }
        }
        // process in order, so push reversed onto the stack
        for s in next.into_iter().rev() {
            work.push((to_parent(&s), depth + 1));
        }
    }
    done.sort_by_key(|s| s.as_slice().first().copied());
    Ok((done, stats))
}

/// Fate of one input cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fate {
    pub label: FateLabel,
    pub removed_at_filter: bool,
    /// Ids of output clusters carved from this cluster.
    pub outputs: Vec<String>,
}

/// Classify every input cluster by the output clusters contained in it.
/// Fails if an output cluster is not a subset of a single input cluster.
pub fn classify_fate(input: &Clustering, output: &Clustering) -> Result<Vec<(String, Fate)>> {
    let mut outputs: Vec<Vec<usize>> = vec![Vec::new(); input.len()];
    for (j, cl) in output.clusters().iter().enumerate() {
        let parent = cl.nodes.iter().next().and_then(|v| input.cluster_of(v));
        match parent {
            Some(p) if cl.nodes.iter().all(|v| input.cluster_of(v) == Some(p)) => {
                outputs[p].push(j)
            }
            _ => {
                return Err(Error::Consistency(format!(
                    "output cluster `{}` is not contained in a single input cluster",
                    cl.id
                )))
            }
        }
    }
    Ok(input
        .clusters()
        .iter()
        .zip(outputs)
        .map(|(cl, outs)| {
            let label = match outs.len() {
                0 => FateLabel::Degraded,
                1 if output.clusters()[outs[0]].nodes == cl.nodes => FateLabel::Extant,
                1 => FateLabel::Reduced,
                _ => FateLabel::Split,
            };
            let fate = Fate {
                label,
                removed_at_filter: false,
                outputs: outs.iter().map(|&j| output.clusters()[j].id.clone()).collect(),
            };
            (cl.id.clone(), fate)
        })
        .collect())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageSummary {
    pub stage: &'static str,
    pub clusters: usize,
    pub nodes_clustered: usize,
    /// Node coverage by clusters of size >= 2.
    pub coverage_ge2: f64,
    /// Node coverage by clusters of size >= B.
    pub coverage_ge_b: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FateCounts {
    pub extant: usize,
    pub reduced: usize,
    pub split: usize,
    pub degraded: usize,
    /// Subset of `degraded` removed by the stage 2 filter.
    pub degraded_at_filter: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Postcondition {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Postcondition {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Serializable summary of a pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmSummary {
    pub params: CmParams,
    pub node_count: usize,
    pub stages: Vec<StageSummary>,
    pub fates: BTreeMap<String, Fate>,
    pub fate_counts: FateCounts,
    pub removed: FilterRemoved,
    pub recursion: CmStats,
    pub postcondition: Postcondition,
}

/// Everything produced by [`run_pipeline`].
#[derive(Clone, Debug)]
pub struct CmReport {
    pub input: Clustering,
    pub filtered: Clustering,
    pub output: Clustering,
    /// Per input cluster, in input order.
    pub fates: Vec<(String, Fate)>,
    pub summary: CmSummary,
}

fn stage_summary(stage: &'static str, c: &Clustering, n: usize, b: usize) -> StageSummary {
    let cov = |m| if n == 0 { 0.0 } else { node_coverage(c, n, m).unwrap_or(0.0) };
    StageSummary {
        stage,
        clusters: c.len(),
        nodes_clustered: c.assigned_count(),
        coverage_ge2: cov(2),
        coverage_ge_b: cov(b),
    }
}

/// Run all four stages. With `input` absent, stage 1 runs the configured
/// clusterer on `g`.
pub fn run_pipeline(g: &Graph, params: &CmParams, input: Option<Clustering>) -> Result<CmReport> {
    params.validate()?;
    let n = g.node_count();
    let input = match input {
        Some(c) => {
            if c.node_count() != n {
                return Err(Error::InvalidArgument(format!(
                    "clustering covers {} nodes, graph has {n}",
                    c.node_count()
                )));
            }
            c
        }
        None if n == 0 => Clustering::new(0),
        None => run_clusterer(g, &params.clusterer)?,
    };

    let (filtered, removed) = filter_stage(&input, g, params)?;

    let results = filtered
        .clusters()
        .par_iter()
        .map(|cl| {
            let sub = induced_subgraph_mapped(g, &cl.nodes)?;
            let (sets, stats) = cm_cluster_with_stats(&sub.graph, params)?;
            Ok((sets.into_iter().map(|s| sub.lift(&s)).collect::<Vec<_>>(), stats))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut output = Clustering::new(n);
    let mut recursion = CmStats::default();
    for (sets, stats) in results {
        recursion.merge(&stats);
        for s in sets {
            if s.len() >= params.min_size {
                output.push(output.len().to_string(), s)?;
            }
        }
    }

    let postcondition = verify_output(g, &output, params)?;

    let mut fates = classify_fate(&input, &output)?;
    let filtered_out: std::collections::HashSet<&String> =
        removed.small.iter().chain(&removed.trees).collect();
    let mut fate_counts = FateCounts::default();
    for (id, fate) in fates.iter_mut() {
        fate.removed_at_filter = filtered_out.contains(id);
        match fate.label {
            FateLabel::Extant => fate_counts.extant += 1,
            FateLabel::Reduced => fate_counts.reduced += 1,
            FateLabel::Split => fate_counts.split += 1,
            FateLabel::Degraded => {
                fate_counts.degraded += 1;
                if fate.removed_at_filter {
                    fate_counts.degraded_at_filter += 1;
                }
            }
        }
    }

    let b = params.min_size;
    let summary = CmSummary {
        params: params.clone(),
        node_count: n,
        stages: vec![
            stage_summary("input", &input, n, b),
            stage_summary("filtered", &filtered, n, b),
            stage_summary("output", &output, n, b),
        ],
        fates: fates.iter().cloned().collect(),
        fate_counts,
        removed,
        recursion,
        postcondition,
    };
    Ok(CmReport {
        input,
        filtered,
        output,
        fates,
        summary,
    })
}

/// Recompute the minimum cut of every output cluster and check size and
/// well-connectedness.
pub fn verify_output(g: &Graph, output: &Clustering, params: &CmParams) -> Result<Postcondition> {
    let violations = output
        .clusters()
        .par_iter()
        .map(|cl| {
            let n = cl.nodes.len();
            if n < params.min_size || n < 2 {
                return Ok(Some(format!("cluster {} has {n} nodes", cl.id)));
            }
            let cut = global_min_cut(&induced_subgraph(g, &cl.nodes)?)?;
            Ok((!params.threshold.is_exceeded_by(cut.weight, n)).then(|| {
                format!(
                    "cluster {} (n = {n}) has min cut {} <= {}",
                    cl.id,
                    cut.weight,
                    params.threshold.eval(n)
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Postcondition {
        checked: output.len(),
        violations: violations.into_iter().flatten().collect(),
    })
}
