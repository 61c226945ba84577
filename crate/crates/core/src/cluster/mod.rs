// SPDX-License-Identifier: Apache-2.0

//! Clusterings and the clusterers that produce them.

mod ikc;
mod io;
mod leiden;
mod quality;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, NodeId, NodeSet};
use crate::mincut::global_min_cut;

pub use ikc::cluster_ikc;
pub use io::{load_clustering, write_clustering};
pub use leiden::{cluster_quality_opt, Objective};
pub use quality::{quality_cpm, quality_modularity};

const UNASSIGNED: u32 = u32::MAX;

/// A named cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub id: String,
    pub nodes: NodeSet,
}

/// Partition of a subset of a graph's nodes into disjoint clusters.
///
/// Nodes that belong to no cluster are implicit singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clustering {
    node_count: usize,
    clusters: Vec<Cluster>,
    assignment: Vec<u32>,
}

impl Clustering {
    /// Empty clustering over `node_count` nodes (everything a singleton).
    pub fn new(node_count: usize) -> Self {
        Clustering {
            node_count,
            clusters: Vec::new(),
            assignment: vec![UNASSIGNED; node_count],
        }
    }

    /// Group nodes by membership value. Groups of size one stay implicit;
    /// cluster ids are `0, 1, ..` ordered by smallest member.
    pub fn from_membership(membership: &[u32]) -> Self {
        let mut sets = group_by_label(membership);
        sets.retain(|s| s.len() > 1);
        Self::from_sets(membership.len(), sets).expect("groups are disjoint")
    }

    /// Clusters from disjoint node sets, numbered in the given order.
    pub fn from_sets(node_count: usize, sets: Vec<NodeSet>) -> Result<Self> {
        let mut c = Clustering::new(node_count);
        for (i, s) in sets.into_iter().enumerate() {
            c.push(i.to_string(), s)?;
        }
        Ok(c)
    }

    /// Append a cluster. Fails if any node is already assigned or out of
    /// range.
    pub fn push(&mut self, id: impl Into<String>, nodes: NodeSet) -> Result<()> {
        let idx = self.clusters.len() as u32;
        for v in nodes.iter() {
            let slot = self.assignment.get_mut(v as usize).ok_or_else(|| {
                Error::InvalidArgument(format!("node {v} outside clustering universe"))
            })?;
            if *slot != UNASSIGNED {
                return Err(Error::InvalidArgument(format!("node {v} assigned twice")));
            }
            *slot = idx;
        }
        self.clusters.push(Cluster {
            id: id.into(),
            nodes,
        });
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index into [`clusters`](Self::clusters) of the cluster holding `v`.
    pub fn cluster_of(&self, v: NodeId) -> Option<usize> {
        match self.assignment[v as usize] {
            UNASSIGNED => None,
            c => Some(c as usize),
        }
    }

    pub fn assigned_count(&self) -> usize {
        self.clusters.iter().map(|c| c.nodes.len()).sum()
    }

    /// Cluster index per node, with every unassigned node given a fresh
    /// singleton label.
    pub fn materialized_labels(&self) -> Vec<u32> {
        let mut next = self.clusters.len() as u32;
        self.assignment
            .iter()
            .map(|&c| {
                if c == UNASSIGNED {
                    next += 1;
                    next - 1
                } else {
                    c
                }
            })
            .collect()
    }

    /// Keep only clusters for which `keep` returns true.
    pub fn retain(&self, mut keep: impl FnMut(&Cluster) -> bool) -> Clustering {
        let mut out = Clustering::new(self.node_count);
        for c in &self.clusters {
            if keep(c) {
                out.push(c.id.clone(), c.nodes.clone()).expect("subset of a valid clustering");
            }
        }
        out
    }
}

pub(crate) fn group_by_label(membership: &[u32]) -> Vec<NodeSet> {
    let mut slot = std::collections::HashMap::new();
    let mut groups: Vec<Vec<NodeId>> = Vec::new();
    for (v, &m) in membership.iter().enumerate() {
        let i = *slot.entry(m).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[i].push(v as NodeId);
    }
    groups.into_iter().map(NodeSet::from_unsorted).collect()
}

/// Per-cluster counts used by the quality functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterStats {
    /// Cluster size.
    pub n_c: usize,
    /// Edges with both endpoints inside.
    pub e_c: usize,
    /// Sum of member degrees in the full graph.
    pub d_c: usize,
    pub mincut: Option<usize>,
}

impl ClusterStats {
    pub fn compute(g: &Graph, nodes: &NodeSet, with_mincut: bool) -> Result<Self> {
        let sub = induced_subgraph(g, nodes)?;
        let mincut = if with_mincut && sub.node_count() >= 2 {
            Some(global_min_cut(&sub)?.weight)
        } else {
            None
        };
        Ok(ClusterStats {
            n_c: nodes.len(),
            e_c: sub.edge_count(),
            d_c: nodes.iter().map(|v| g.degree(v)).sum(),
            mincut,
        })
    }
}

/// Which clusterer to run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClustererKind {
    Cpm { resolution: f64 },
    Modularity,
    Ikc { k: u32 },
    /// Clustering read from a TSV file.
    External { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClustererConfig {
    #[serde(flatten)]
    pub kind: ClustererKind,
    pub seed: u64,
}

impl ClustererConfig {
    pub fn cpm(resolution: f64, seed: u64) -> Self {
        ClustererConfig {
            kind: ClustererKind::Cpm { resolution },
            seed,
        }
    }

    pub fn modularity(seed: u64) -> Self {
        ClustererConfig {
            kind: ClustererKind::Modularity,
            seed,
        }
    }

    pub fn ikc(k: u32) -> Self {
        ClustererConfig {
            kind: ClustererKind::Ikc { k },
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            ClustererKind::Cpm { resolution } if !(*resolution > 0.0 && resolution.is_finite()) => {
                Err(Error::InvalidArgument(format!(
                    "CPM resolution must be positive, got {resolution}"
                )))
            }
            ClustererKind::Ikc { k: 0 } => {
                Err(Error::InvalidArgument("IKC k must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Same configuration with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        ClustererConfig {
            kind: self.kind.clone(),
            seed,
        }
    }
}

/// Run the configured clusterer on `g`.
pub fn run_clusterer(g: &Graph, config: &ClustererConfig) -> Result<Clustering> {
    config.validate()?;
    match &config.kind {
        ClustererKind::Cpm { resolution } => {
            Ok(cluster_quality_opt(g, Objective::Cpm(*resolution), config.seed))
        }
        ClustererKind::Modularity => Ok(cluster_quality_opt(g, Objective::Modularity, config.seed)),
        ClustererKind::Ikc { k } => Ok(cluster_ikc(g, *k)),
        ClustererKind::External { path } => {
            let file = std::fs::File::open(path)?;
            load_clustering(std::io::BufReader::new(file), g)
        }
    }
}
