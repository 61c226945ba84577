// SPDX-License-Identifier: Apache-2.0

//! Small deterministic graph families and a seeded citation-style network.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use crate::graph::{Graph, NodeId};

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n as NodeId).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n as NodeId).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((n as NodeId - 1, 0));
    }
    Graph::from_edges(n, &edges)
}

/// Star with node 0 at the center and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves as NodeId).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Disjoint union; node ids of later parts are shifted past earlier ones.
pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let (n, edges) = union_edges(parts);
    Graph::from_edges(n, &edges)
}

fn union_edges(parts: &[Graph]) -> (usize, Vec<(NodeId, NodeId)>) {
    let mut offset = 0 as NodeId;
    let mut edges = Vec::new();
    for g in parts {
        edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
        offset += g.node_count() as NodeId;
    }
    (offset as usize, edges)
}

/// Disjoint union plus extra edges given in the union's id space.
pub fn union_with_edges(parts: &[Graph], extra: &[(NodeId, NodeId)]) -> Graph {
    let (n, mut edges) = union_edges(parts);
    edges.extend_from_slice(extra);
    Graph::from_edges(n, &edges)
}

/// Two copies of `K_k` joined by the single edge `(0, k)`.
pub fn bridged_cliques(k: usize) -> Graph {
    union_with_edges(&[complete(k), complete(k)], &[(0, k as NodeId)])
}

/// `count` cliques of size `k` in a ring; clique `i`'s node 0 links to
/// clique `i+1`'s node 1.
pub fn ring_of_cliques(count: usize, k: usize) -> Graph {
    let parts = vec![complete(k); count];
    let extra: Vec<_> = (0..count)
        .map(|i| {
            let next = (i + 1) % count;
            ((i * k) as NodeId, (next * k + 1) as NodeId)
        })
        .collect();
    union_with_edges(&parts, &extra)
}

/// G(n, p) random graph.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Parameters of [`citation_network`].
#[derive(Clone, Debug)]
pub struct CitationModel {
    pub nodes: usize,
    /// Mean number of references per paper; the undirected average degree
    /// is roughly twice this.
    pub mean_references: f64,
    /// Fraction of references drawn from outside the citing paper's field.
    pub mixing: f64,
    pub min_field: usize,
    pub max_field: usize,
    pub seed: u64,
}

impl Default for CitationModel {
    /// Scaled to the size and density of the HEP-PH arXiv citation graph
    /// (34,546 papers, average degree about 24.4).
    fn default() -> Self {
        CitationModel {
            nodes: 34_546,
            mean_references: 15.0,
            mixing: 0.3,
            min_field: 20,
            max_field: 2_000,
            seed: 0x5eed_c17e,
        }
    }
}

/// Growing citation graph with planted fields. Papers arrive in random
/// order; each cites earlier papers, mostly inside its own field, choosing
/// targets half uniformly and half by copying a reference of an earlier
/// paper (which yields heavy-tailed in-degree). Field sizes follow a power
/// law with exponent 2 between `min_field` and `max_field`.
pub fn citation_network(model: &CitationModel) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let n = model.nodes;

    let (field_of, field) = assign_fields(model, &mut rng);

    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); field as usize];
    // references made so far, per field and overall, for copying
    let mut field_refs: Vec<Vec<NodeId>> = vec![Vec::new(); field as usize];
    let mut all_refs: Vec<NodeId> = Vec::new();
    let mut edges = Vec::new();
    // lognormal with mean 1: many papers with a handful of in-graph
    // references, a long tail of review-style ones
    let sigma = 1.0;
    let ref_scale = LogNormal::new(-0.5 * sigma * sigma, sigma).expect("valid lognormal");

    for v in 0..n as NodeId {
        let f = field_of[v as usize] as usize;
        let refs = (model.mean_references * ref_scale.sample(&mut rng)).round() as usize;
        for _ in 0..refs {
            let inside = rng.random::<f64>() >= model.mixing;
            let (pool, copied) = if inside {
                (&members[f], &field_refs[f])
            } else {
                (&members[rng.random_range(0..members.len())], &all_refs)
            };
            if pool.is_empty() {
                continue;
            }
            let target = if !copied.is_empty() && rng.random_bool(0.5) {
                copied[rng.random_range(0..copied.len())]
            } else {
                pool[rng.random_range(0..pool.len())]
            };
            edges.push((v, target));
            field_refs[field_of[target as usize] as usize].push(target);
            all_refs.push(target);
        }
        members[f].push(v);
    }
    Graph::from_edges(n, &edges)
}

/// Planted field of every node of [`citation_network`], for ground-truth
/// comparisons.
pub fn citation_fields(model: &CitationModel) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    assign_fields(model, &mut rng).0
}

fn assign_fields(model: &CitationModel, rng: &mut ChaCha8Rng) -> (Vec<u32>, u32) {
    let n = model.nodes;
    let mut field_of = Vec::with_capacity(n);
    let mut field = 0u32;
    while field_of.len() < n {
        let u: f64 = rng.random();
        let (a, b) = (model.min_field as f64, model.max_field as f64);
        // inverse CDF of a continuous power law with exponent 2 on [a, b]
        let size = (1.0 / (1.0 / a - u * (1.0 / a - 1.0 / b))).round() as usize;
        for _ in 0..size.min(n - field_of.len()) {
            field_of.push(field);
        }
        field += 1;
    }
    field_of.shuffle(rng);
    (field_of, field)
}
