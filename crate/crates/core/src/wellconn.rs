// SPDX-License-Identifier: Apache-2.0

//! Well-connectedness thresholds and per-cluster connectivity profiles.
//!
//! A cluster on `n` nodes is well connected when its minimum edge cut is
//! strictly greater than `t(n)`. Singletons have no cut and are never well
//! connected.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::Clustering;
use crate::cm::node_coverage;
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, is_tree, Graph};
use crate::mincut::global_min_cut;

/// Lower bound on the minimum cut of a cluster as a function of its size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdFn {
    /// `log10 n`
    #[default]
    Log10,
    /// `log2 n`
    Log2,
    /// `sqrt(n) / 5`
    SqrtDiv5,
    /// `r (n - 1)`: the bound every cluster of a CPM-optimal clustering
    /// with resolution `r` satisfies.
    TraagLinear { r: f64 },
    /// `a n + b log10 n + c`
    Custom { a: f64, b: f64, c: f64 },
}

impl ThresholdFn {
    /// Reject parameters that could make the threshold negative or
    /// non-finite for some `n >= 1`.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ThresholdFn::TraagLinear { r } => r > 0.0 && r.is_finite(),
            ThresholdFn::Custom { a, b, c } => {
                [a, b, c].iter().all(|x| x.is_finite() && *x >= 0.0)
            }
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid threshold {self}")))
        }
    }

    /// Threshold at size `n`; `n` must be at least 1.
    #[inline]
    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            ThresholdFn::Log10 => x.log10(),
            ThresholdFn::Log2 => x.log2(),
            ThresholdFn::SqrtDiv5 => x.sqrt() / 5.0,
            ThresholdFn::TraagLinear { r } => r * (x - 1.0),
            ThresholdFn::Custom { a, b, c } => a * x + b * x.log10() + c,
        }
    }

    /// `mincut > t(n)`.
    #[inline]
    pub fn is_exceeded_by(&self, mincut: usize, n: usize) -> bool {
        mincut as f64 > self.eval(n)
    }
}

impl fmt::Display for ThresholdFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdFn::Log10 => write!(f, "log10(n)"),
            ThresholdFn::Log2 => write!(f, "log2(n)"),
            ThresholdFn::SqrtDiv5 => write!(f, "sqrt(n)/5"),
            ThresholdFn::TraagLinear { r } => write!(f, "{r}*(n-1)"),
            ThresholdFn::Custom { a, b, c } => write!(f, "{a}*n + {b}*log10(n) + {c}"),
        }
    }
}

pub fn threshold_value(t: ThresholdFn, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("threshold needs n >= 1".into()));
    }
    Ok(t.eval(n))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterProfile {
    pub id: String,
    pub n: usize,
    /// `None` for singletons.
    pub mincut: Option<usize>,
    pub well_connected: bool,
    pub is_tree: bool,
    pub connected: bool,
}

/// Profile one cluster given as its induced subgraph.
pub fn is_well_connected(cluster: &Graph, t: ThresholdFn) -> Result<ClusterProfile> {
    let n = cluster.node_count();
    let tree = is_tree(cluster)?;
    if n == 1 {
        return Ok(ClusterProfile {
            id: String::new(),
            n,
            mincut: None,
            well_connected: false,
            is_tree: tree,
            connected: true,
        });
    }
    let mincut = global_min_cut(cluster)?.weight;
    Ok(ClusterProfile {
        id: String::new(),
        n,
        mincut: Some(mincut),
        well_connected: t.is_exceeded_by(mincut, n),
        is_tree: tree,
        connected: mincut >= 1,
    })
}

/// Connectivity profile of a whole clustering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileReport {
    pub clusters: Vec<ClusterProfile>,
    /// Percent of profiled clusters (size >= `min_size`) that are well
    /// connected.
    pub pct_well_connected: f64,
    pub pct_disconnected: f64,
    /// Percent of graph nodes in clusters of size >= `min_size`.
    pub node_coverage: f64,
    pub threshold: ThresholdFn,
    pub min_size: usize,
    /// Which clusters the percentages are taken over.
    pub denominator: &'static str,
}

impl ProfileReport {
    /// `(n, mincut)` rows for every profiled cluster with a defined cut.
    pub fn write_scatter<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n\tmincut")?;
        for p in &self.clusters {
            if let Some(m) = p.mincut {
                writeln!(out, "{}\t{}", p.n, m)?;
            }
        }
        Ok(())
    }
}

/// Profile every cluster of `c` with at least `min_size` nodes.
pub fn profile_clustering(
    g: &Graph,
    c: &Clustering,
    t: ThresholdFn,
    min_size: usize,
) -> Result<ProfileReport> {
    t.validate()?;
    let clusters = c
        .clusters()
        .par_iter()
        .filter(|cl| cl.nodes.len() >= min_size.max(1))
        .map(|cl| {
            let sub = induced_subgraph(g, &cl.nodes)?;
            let mut p = is_well_connected(&sub, t)?;
            p.id = cl.id.clone();
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let pct = |count: usize| {
        if clusters.is_empty() {
            0.0
        } else {
            100.0 * count as f64 / clusters.len() as f64
        }
    };
    let well = clusters.iter().filter(|p| p.well_connected).count();
    let disconnected = clusters.iter().filter(|p| !p.connected).count();
    let node_coverage = if g.node_count() == 0 {
        0.0
    } else {
        node_coverage(c, g.node_count(), min_size.max(1))?
    };
    Ok(ProfileReport {
        pct_well_connected: pct(well),
        pct_disconnected: pct(disconnected),
        node_coverage,
        threshold: t,
        min_size,
        denominator: "clusters with size >= min_size",
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::graph::NodeSet;
    use approx::assert_abs_diff_eq;

    #[test]
    fn threshold_values() {
        assert_abs_diff_eq!(threshold_value(ThresholdFn::Log10, 1000).unwrap(), 3.0);
        let t = ThresholdFn::TraagLinear { r: 0.01 };
        assert_abs_diff_eq!(threshold_value(t, 50).unwrap(), 0.49, epsilon = 1e-12);
        assert!(threshold_value(ThresholdFn::Log10, 0).is_err());
        // crossover between log10 and Traag's bound at r = 0.01
        assert!(ThresholdFn::Log10.eval(239) < t.eval(239));
        assert!(ThresholdFn::Log10.eval(238) > t.eval(238));
        assert_abs_diff_eq!(ThresholdFn::SqrtDiv5.eval(100), 2.0);
        assert_abs_diff_eq!(ThresholdFn::Log2.eval(1024), 10.0);
        let custom = ThresholdFn::Custom { a: 0.5, b: 2.0, c: 1.0 };
        assert_abs_diff_eq!(custom.eval(100), 50.0 + 4.0 + 1.0);
        assert!(ThresholdFn::Custom { a: -1.0, b: 0.0, c: 0.0 }.validate().is_err());
        assert!(ThresholdFn::TraagLinear { r: 0.0 }.validate().is_err());
    }

    #[test]
    fn boundary_is_strict() {
        // n = 10 with a bridge-like cut of 1: 1 <= log10(10)
        let g = union_with_edges(&[complete(5), complete(5)], &[(0, 5)]);
        let p = is_well_connected(&g, ThresholdFn::Log10).unwrap();
        assert_eq!(p.mincut, Some(1));
        assert!(!p.well_connected);
    }

    #[test]
    fn clique_and_path() {
        let p = is_well_connected(&complete(12), ThresholdFn::Log10).unwrap();
        assert!(p.well_connected && p.connected && !p.is_tree);
        assert_eq!(p.mincut, Some(11));
        let p = is_well_connected(&path(20), ThresholdFn::Log10).unwrap();
        assert!(!p.well_connected && p.is_tree);
        let p = is_well_connected(&Graph::from_edges(1, &[]), ThresholdFn::Log10).unwrap();
        assert_eq!((p.mincut, p.well_connected), (None, false));
        assert!(is_well_connected(&Graph::empty(), ThresholdFn::Log10).is_err());
    }

    #[test]
    fn profile_reports() {
        let g = disjoint_union(&[complete(12), complete(12)]);
        let c = Clustering::from_sets(
            24,
            vec![NodeSet::from_unsorted((0..12).collect()), NodeSet::from_unsorted((12..24).collect())],
        )
        .unwrap();
        let r = profile_clustering(&g, &c, ThresholdFn::Log10, 11).unwrap();
        assert_eq!((r.pct_well_connected, r.pct_disconnected, r.node_coverage), (100.0, 0.0, 100.0));

        let g = disjoint_union(&[complete(3), complete(3)]);
        let c = Clustering::from_sets(6, vec![NodeSet::full(6)]).unwrap();
        let r = profile_clustering(&g, &c, ThresholdFn::Log10, 2).unwrap();
        assert_eq!(r.clusters[0].mincut, Some(0));
        assert!(!r.clusters[0].connected);
        assert_eq!(r.pct_disconnected, 100.0);

        let r = profile_clustering(&g, &Clustering::new(6), ThresholdFn::Log10, 11).unwrap();
        assert!(r.clusters.is_empty());
        assert_eq!((r.pct_well_connected, r.node_coverage), (0.0, 0.0));
    }

    #[test]
    fn scatter_skips_singletons() {
        let g = complete(3);
        let mut c = Clustering::new(3);
        c.push("a", NodeSet::from_unsorted(vec![0, 1])).unwrap();
        c.push("b", NodeSet::from_unsorted(vec![2])).unwrap();
        let r = profile_clustering(&g, &c, ThresholdFn::Log10, 1).unwrap();
        let mut out = Vec::new();
        r.write_scatter(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n\tmincut\n2\t1\n");
    }
}
