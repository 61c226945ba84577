// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::Clustering;

/// `(e_c, n_c, d_c)` for every explicit cluster.
fn cluster_counts(g: &Graph, c: &Clustering) -> Vec<(usize, usize, usize)> {
    let mut counts: Vec<(usize, usize, usize)> = c
        .clusters()
        .iter()
        .map(|cl| (0, cl.nodes.len(), 0))
        .collect();
    for v in g.nodes() {
        if let Some(i) = c.cluster_of(v) {
            counts[i].2 += g.degree(v);
        }
    }
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (c.cluster_of(u), c.cluster_of(v)) {
            if a == b {
                counts[a].0 += 1;
            }
        }
    }
    counts
}

/// Constant Potts Model quality `Σ_c e_c − r·n_c(n_c−1)/2`. Implicit
/// singletons contribute zero.
pub fn quality_cpm(g: &Graph, c: &Clustering, resolution: f64) -> Result<f64> {
    if resolution.is_nan() || resolution <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "CPM resolution must be positive, got {resolution}"
        )));
    }
    Ok(cluster_counts(g, c)
        .into_iter()
        .map(|(e, n, _)| e as f64 - resolution * (n * n.saturating_sub(1)) as f64 / 2.0)
        .sum())
}

/// Newman modularity `Σ_c e_c/m − (d_c/2m)²`, with implicit singletons
/// included.
pub fn quality_modularity(g: &Graph, c: &Clustering) -> Result<f64> {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return Err(Error::InvalidArgument("modularity of an edgeless graph".into()));
    }
    let explicit: f64 = cluster_counts(g, c)
        .into_iter()
        .map(|(e, _, d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum();
    let singletons: f64 = g
        .nodes()
        .filter(|&v| c.cluster_of(v).is_none())
        .map(|v| (g.degree(v) as f64 / (2.0 * m)).powi(2))
        .sum();
    Ok(explicit - singletons)
}
