// SPDX-License-Identifier: Apache-2.0

//! Exact global minimum edge cuts.
//!
//! [`global_min_cut`] follows Nagamochi, Ono and Ibaraki: a maximum
//! adjacency scan certifies a lower bound `q(e)` on the local connectivity
//! of every edge it touches, and any edge with `q(e)` at least the best cut
//! found so far can be contracted without losing a smaller cut. Every
//! contracted vertex is itself a candidate cut (its weighted degree). The
//! last vertex of each scan always admits a contraction, so each round
//! shrinks the graph.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{component_ids, label_cmp, Graph, NodeId, NodeSet};

/// A global minimum edge cut with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    /// Number of cut edges.
    pub weight: usize,
    /// One side of the cut: the smaller one, or on equal sizes the side
    /// holding the smallest label.
    pub side_a: NodeSet,
    /// Crossing edges as `(a, b)` with `a` in `side_a`, sorted.
    pub cut_edges: Vec<(NodeId, NodeId)>,
}

impl CutResult {
    fn from_side(g: &Graph, side: Vec<bool>) -> Self {
        let n = g.node_count();
        let count = side.iter().filter(|&&s| s).count();
        let flip = match count.cmp(&(n - count)) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let min = g
                    .nodes()
                    .min_by(|&a, &b| label_cmp(g.label(a), g.label(b)))
                    .unwrap();
                !side[min as usize]
            }
        };
        let in_a = |v: NodeId| side[v as usize] != flip;
        let side_a: NodeSet = g.nodes().filter(|&v| in_a(v)).collect();
        let mut cut_edges: Vec<(NodeId, NodeId)> = g
            .edges()
            .filter(|&(u, v)| in_a(u) != in_a(v))
            .map(|(u, v)| if in_a(u) { (u, v) } else { (v, u) })
            .collect();
        cut_edges.sort_unstable();
        CutResult {
            weight: cut_edges.len(),
            side_a,
            cut_edges,
        }
    }
}

/// Exact global minimum cut of `g`. A disconnected graph has weight 0 and
/// `side_a` is its smallest component.
pub fn global_min_cut(g: &Graph) -> Result<CutResult> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "minimum cut needs at least 2 nodes, graph has {n}"
        )));
    }
    let (comp, count) = component_ids(g);
    if count > 1 {
        let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); count];
        for v in g.nodes() {
            members[comp[v as usize] as usize].push(v);
        }
        let smallest = members
            .iter()
            .min_by(|a, b| {
                a.len().cmp(&b.len()).then_with(|| {
                    let la = a.iter().map(|&v| g.label(v)).min_by(|x, y| label_cmp(x, y));
                    let lb = b.iter().map(|&v| g.label(v)).min_by(|x, y| label_cmp(x, y));
                    label_cmp(la.unwrap(), lb.unwrap())
                })
            })
            .unwrap();
        return Ok(CutResult {
            weight: 0,
            side_a: NodeSet::from_unsorted(smallest.clone()),
            cut_edges: Vec::new(),
        });
    }

    let mut side = vec![false; n];
    for v in noi_min_cut_side(g) {
        side[v as usize] = true;
    }
    Ok(CutResult::from_side(g, side))
}

/// Weighted multigraph under contraction.
struct Contracted {
    adj: Vec<Vec<(u32, u64)>>,
    members: Vec<Vec<NodeId>>,
}

impl Contracted {
    fn weighted_degree(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // smaller id becomes the root so the contracted order is stable
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Nodes on one side of a minimum cut of a connected graph with ≥ 2 nodes.
fn noi_min_cut_side(g: &Graph) -> Vec<NodeId> {
    let mut cur = Contracted {
        adj: g
            .nodes()
            .map(|v| g.neighbors(v).iter().map(|&w| (w, 1u64)).collect())
            .collect(),
        members: g.nodes().map(|v| vec![v]).collect(),
    };

    let (mut best, mut best_vertex) = (u64::MAX, 0usize);
    for v in 0..cur.adj.len() {
        let d = cur.weighted_degree(v);
        if d < best {
            best = d;
            best_vertex = v;
        }
    }
    let mut best_side = cur.members[best_vertex].clone();

    while cur.adj.len() > 2 && best > 1 {
        let k = cur.adj.len();
        let mut parent: Vec<u32> = (0..k as u32).collect();
        let mut attach = vec![0u64; k];
        let mut visited = vec![false; k];
        let mut heap = BinaryHeap::with_capacity(k);
        heap.push((0u64, Reverse(0u32)));
        while let Some((r, Reverse(v))) = heap.pop() {
            let vi = v as usize;
            if visited[vi] || r != attach[vi] {
                continue;
            }
            visited[vi] = true;
            for &(w, c) in &cur.adj[vi] {
                let wi = w as usize;
                if visited[wi] {
                    continue;
                }
                attach[wi] += c;
                if attach[wi] >= best {
                    union(&mut parent, v, w);
                }
                heap.push((attach[wi], Reverse(w)));
            }
        }

        // renumber roots in increasing order of their smallest member
        let mut new_id = vec![u32::MAX; k];
        let mut next = 0u32;
        for v in 0..k as u32 {
            let r = find(&mut parent, v) as usize;
            if new_id[r] == u32::MAX {
                new_id[r] = next;
                next += 1;
            }
            new_id[v as usize] = new_id[r];
        }
        let k2 = next as usize;
        debug_assert!(k2 < k, "a scan always contracts at least one edge");

        let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); k2];
        for (v, m) in cur.members.into_iter().enumerate() {
            members[new_id[v] as usize].extend(m);
        }
        let mut adj: Vec<Vec<(u32, u64)>> = vec![Vec::new(); k2];
        let mut acc: HashMap<u32, u64> = HashMap::new();
        let mut groups: Vec<Vec<u32>> = vec![Vec::new(); k2];
        for v in 0..k {
            groups[new_id[v] as usize].push(v as u32);
        }
        for (x, group) in groups.iter().enumerate() {
            acc.clear();
            for &v in group {
                for &(w, c) in &cur.adj[v as usize] {
                    let y = new_id[w as usize];
                    if y as usize != x {
                        *acc.entry(y).or_insert(0) += c;
                    }
                }
            }
            let mut list: Vec<(u32, u64)> = acc.iter().map(|(&y, &c)| (y, c)).collect();
            list.sort_unstable();
            adj[x] = list;
        }
        cur = Contracted { adj, members };
        if cur.adj.len() < 2 {
            // everything merged: no cut lighter than `best` exists
            break;
        }

        for v in 0..cur.adj.len() {
            let d = cur.weighted_degree(v);
            if d < best {
                best = d;
                best_side = cur.members[v].clone();
            }
        }
    }
    best_side
}

/// Largest graph accepted by [`brute_force_min_cut`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exhaustive minimum over all bipartitions; the test oracle for
/// [`global_min_cut`]. Among minimum cuts it returns the one with the
/// smallest `side_a`, then the lexicographically smallest sorted labels.
pub fn brute_force_min_cut(g: &Graph) -> Result<CutResult> {
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            nodes: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "minimum cut needs at least 2 nodes, graph has {n}"
        )));
    }
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let mut best: Option<CutResult> = None;
    // node n-1 is pinned to the complement, so each bipartition is seen once
    for mask in 1u32..(1u32 << (n - 1)) {
        let weight = edges
            .iter()
            .filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1))
            .count();
        if best.as_ref().is_some_and(|b| weight > b.weight) {
            continue;
        }
        let cand = CutResult::from_side(g, (0..n).map(|v| (mask >> v) & 1 == 1).collect());
        let better = match &best {
            None => true,
            Some(b) if weight < b.weight => true,
            Some(b) => side_order(g, &cand.side_a, &b.side_a) == Ordering::Less,
        };
        if better {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one bipartition"))
}

/// Size first, then sorted label sequences compared elementwise.
fn side_order(g: &Graph, a: &NodeSet, b: &NodeSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let mut la: Vec<&str> = a.iter().map(|v| g.label(v)).collect();
        let mut lb: Vec<&str> = b.iter().map(|v| g.label(v)).collect();
        la.sort_by(|x, y| label_cmp(x, y));
        lb.sort_by(|x, y| label_cmp(x, y));
        la.iter()
            .zip(&lb)
            .map(|(x, y)| label_cmp(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::graph::connected_components;

    fn remove_edges(g: &Graph, cut: &[(NodeId, NodeId)]) -> Graph {
        let keep: Vec<_> = g
            .edges()
            .filter(|&(u, v)| !cut.contains(&(u, v)) && !cut.contains(&(v, u)))
            .collect();
        Graph::from_edges(g.node_count(), &keep)
    }

    #[test]
    fn cycle_cut_is_two() {
        let cut = global_min_cut(&cycle(8)).unwrap();
        assert_eq!(cut.weight, 2);
        assert_eq!(cut.cut_edges.len(), 2);
    }

    #[test]
    fn bridge_is_found() {
        let g = bridged_cliques(5);
        let cut = global_min_cut(&g).unwrap();
        assert_eq!(cut.weight, 1);
        assert_eq!(cut.cut_edges, vec![(0, 5)]);
        assert_eq!(cut.side_a.as_slice(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn disconnected_has_zero_weight() {
        let g = disjoint_union(&[complete(3), complete(3)]);
        let cut = global_min_cut(&g).unwrap();
        assert_eq!(cut.weight, 0);
        assert!(cut.cut_edges.is_empty());
        assert_eq!(cut.side_a.as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn complete_graphs() {
        for n in 2..15 {
            assert_eq!(global_min_cut(&complete(n)).unwrap().weight, n - 1);
        }
        assert_eq!(brute_force_min_cut(&complete(4)).unwrap().weight, 3);
        assert_eq!(brute_force_min_cut(&path(6)).unwrap().weight, 1);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(global_min_cut(&complete(1)), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            brute_force_min_cut(&path(21)),
            Err(Error::SizeLimit { nodes: 21, .. })
        ));
    }

    #[test]
    fn brute_force_tie_break_prefers_small_side() {
        // path 0-1-2-3: cuts {0}, {0,1}, {3} ... smallest side, smallest label
        let cut = brute_force_min_cut(&path(4)).unwrap();
        assert_eq!(cut.side_a.as_slice(), &[0]);
        assert_eq!(cut.cut_edges, vec![(0, 1)]);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        for seed in 0..150u64 {
            let n = 2 + (seed % 11) as usize;
            let p = [0.2, 0.4, 0.7][(seed % 3) as usize];
            let g = erdos_renyi(n, p, seed);
            let fast = global_min_cut(&g).unwrap();
            let slow = brute_force_min_cut(&g).unwrap();
            assert_eq!(fast.weight, slow.weight, "seed {seed}");
            assert!(fast.weight <= g.min_degree().unwrap());
            if fast.weight > 0 {
                let before = connected_components(&g).len();
                let after = connected_components(&remove_edges(&g, &fast.cut_edges)).len();
                assert!(after > before, "seed {seed}");
            }
        }
    }

    #[test]
    fn larger_graphs_against_structure() {
        // ring of 6 K_8 cliques: each clique is attached by 2 edges
        let g = ring_of_cliques(6, 8);
        assert_eq!(global_min_cut(&g).unwrap().weight, 2);
        let g = bridged_cliques(40);
        let cut = global_min_cut(&g).unwrap();
        assert_eq!((cut.weight, cut.side_a.len()), (1, 40));
    }
}
