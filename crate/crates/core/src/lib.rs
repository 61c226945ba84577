// SPDX-License-Identifier: Apache-2.0

//! Auditing graph clusterings for well-connectedness, and the Connectivity
//! Modifier: a pipeline that turns any clustering into one whose clusters
//! all have minimum edge cuts above a size-dependent threshold.
//!
//! ```
//! use connmod_core::{generators, run_pipeline, CmParams};
//!
//! // two 20-cliques joined by a single edge
//! let g = generators::bridged_cliques(20);
//! let report = run_pipeline(&g, &CmParams::default(), None).unwrap();
//! assert_eq!(report.output.len(), 2);
//! ```

pub mod cluster;
pub mod cm;
mod error;
pub mod generators;
pub mod graph;
pub mod lfr;
pub mod metrics;
pub mod mincut;
pub mod wellconn;

pub use cluster::{
    load_clustering, run_clusterer, write_clustering, Cluster, ClusterStats, ClustererConfig,
    ClustererKind, Clustering,
};
pub use cm::{run_pipeline, CmParams, CmReport, FateLabel};
pub use error::{Error, Result};
pub use graph::{load_edge_list, write_edge_list, Graph, GraphBuilder, LoadStats, NodeId, NodeSet};
pub use lfr::{estimate_params, LfrParams, PowerLawFit};
pub use metrics::{agreement, ami, ari, nmi, Agreement};
pub use mincut::{global_min_cut, CutResult};
pub use wellconn::{profile_clustering, ProfileReport, ThresholdFn};
