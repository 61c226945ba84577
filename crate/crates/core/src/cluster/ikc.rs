// SPDX-License-Identifier: Apache-2.0

//! Iterative k-core clustering.

use crate::graph::{
    connected_components, core_decomposition, induced_subgraph_mapped, Graph, NodeSet,
};

use super::Clustering;

/// Repeatedly take the top core of the remaining graph (the nodes whose
/// core number equals the current maximum, provided that maximum is at
/// least `k`), emit its largest connected component as a cluster, delete
/// those nodes and start over. Ties between equally large components go
/// to the one with the smallest label. Nodes never emitted stay
/// unclustered, so a graph without a `k`-core yields an empty clustering.
pub fn cluster_ikc(g: &Graph, k: u32) -> Clustering {
    let mut out = Clustering::new(g.node_count());
    let mut remaining = NodeSet::full(g.node_count());
    while !remaining.is_empty() {
        let sub = induced_subgraph_mapped(g, &remaining).expect("remaining ids are valid");
        let cores = core_decomposition(&sub.graph);
        let top = cores.iter().copied().max().unwrap_or(0);
        if top < k {
            break;
        }
        let core_nodes: NodeSet = (0..cores.len() as u32)
            .filter(|&v| cores[v as usize] == top)
            .collect();
        let core = induced_subgraph_mapped(&sub.graph, &core_nodes).expect("valid subset");
        let largest = connected_components(&core.graph)
            .into_iter()
            .next()
            .expect("top core is nonempty");
        let cluster = sub.lift(&core.lift(&largest));
        remaining = remaining.iter().filter(|&v| !cluster.contains(v)).collect();
        out.push(out.len().to_string(), cluster).expect("clusters are disjoint");
    }
    out
}
