// SPDX-License-Identifier: Apache-2.0

//! Clustering TSV files: one `node_label<TAB>cluster_id` row per assigned
//! node.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

use super::Clustering;

/// Read a clustering of `g`. Nodes of `g` missing from the file become
/// implicit singletons. Clusters are ordered by first appearance.
pub fn load_clustering<R: BufRead>(source: R, g: &Graph) -> Result<Clustering> {
    let mut order: Vec<String> = Vec::new();
    let mut members: HashMap<String, Vec<NodeId>> = HashMap::new();
    let mut seen = vec![false; g.node_count()];
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (label, cluster) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Format {
                    line: i + 1,
                    message: "expected `node<TAB>cluster_id`".into(),
                })
            }
        };
        let v = g.id_of(label).ok_or_else(|| Error::UnknownLabel {
            line: i + 1,
            label: label.to_string(),
        })?;
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::Format {
                line: i + 1,
                message: format!("node `{label}` assigned more than once"),
            });
        }
        members
            .entry(cluster.to_string())
            .or_insert_with(|| {
                order.push(cluster.to_string());
                Vec::new()
            })
            .push(v);
    }
    let mut c = Clustering::new(g.node_count());
    for id in order {
        let nodes = NodeSet::from_unsorted(members.remove(&id).unwrap_or_default());
        c.push(id, nodes)?;
    }
    Ok(c)
}

/// Write `c` in the same format [`load_clustering`] reads, clusters in
/// order and members by id.
pub fn write_clustering<W: Write>(g: &Graph, c: &Clustering, mut out: W) -> Result<()> {
    for cluster in c.clusters() {
        for v in cluster.nodes.iter() {
            writeln!(out, "{}\t{}", g.label(v), cluster.id)?;
        }
    }
    Ok(())
}
