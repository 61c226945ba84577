// SPDX-License-Identifier: Apache-2.0

//! Leiden-style optimization of CPM or modularity.
//!
//! Both objectives share one move rule: node `v` with weight `w_v` joining
//! community `D` changes quality by `k_{v,D} − γ·w_v·W_D` (up to a constant
//! that is the same for every candidate). For CPM the node weight is the
//! number of original nodes it represents and `γ = r`; for modularity the
//! node weight is its degree and `γ = 1/2m`.
//!
//! After the multi-level phases converge, a final pass alternates local
//! moves on the original graph with splitting disconnected communities.
//! Both steps strictly increase quality, so the loop ends with connected
//! communities where no single node move improves quality.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::Clustering;

const EPS: f64 = 1e-10;
const MAX_PASSES: usize = 50;

/// Quality function optimized by [`cluster_quality_opt`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Objective {
    /// Constant Potts Model with the given resolution.
    Cpm(f64),
    Modularity,
}

#[derive(Clone)]
struct Network {
    adj: Vec<Vec<(u32, f64)>>,
    node_w: Vec<f64>,
}

impl Network {
    fn from_graph(g: &Graph, objective: Objective) -> Self {
        let adj = g
            .nodes()
            .map(|v| g.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
            .collect();
        let node_w = g
            .nodes()
            .map(|v| match objective {
                Objective::Cpm(_) => 1.0,
                Objective::Modularity => g.degree(v) as f64,
            })
            .collect();
        Network { adj, node_w }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapse nodes sharing a label in `by` (dense `0..k`).
    fn aggregate(&self, by: &[u32], k: usize) -> Network {
        let mut node_w = vec![0.0; k];
        let mut groups: Vec<Vec<u32>> = vec![Vec::new(); k];
        for (v, &c) in by.iter().enumerate() {
            node_w[c as usize] += self.node_w[v];
            groups[c as usize].push(v as u32);
        }
        let mut acc = vec![0.0f64; k];
        let mut touched = Vec::new();
        let mut adj = Vec::with_capacity(k);
        for (c, group) in groups.iter().enumerate() {
            for &v in group {
                for &(u, w) in &self.adj[v as usize] {
                    let d = by[u as usize] as usize;
                    if d == c {
                        continue;
                    }
                    if acc[d] == 0.0 {
                        touched.push(d as u32);
                    }
                    acc[d] += w;
                }
            }
            touched.sort_unstable();
            adj.push(touched.iter().map(|&d| (d, acc[d as usize])).collect());
            for &d in &touched {
                acc[d as usize] = 0.0;
            }
            touched.clear();
        }
        Network { adj, node_w }
    }
}

/// Relabel to dense ids in order of first occurrence; returns the count.
fn renumber(part: &mut [u32]) -> usize {
    let mut map = vec![u32::MAX; part.len().max(1 + part.iter().copied().max().unwrap_or(0) as usize)];
    let mut next = 0u32;
    for p in part.iter_mut() {
        let slot = &mut map[*p as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *p = *slot;
    }
    next as usize
}

/// Scratch space for summing edge weight from one node into communities.
struct NeighborWeights {
    weight: Vec<f64>,
    seen: Vec<bool>,
    touched: Vec<u32>,
}

impl NeighborWeights {
    fn new(n: usize) -> Self {
        NeighborWeights {
            weight: vec![0.0; n],
            seen: vec![false; n],
            touched: Vec::new(),
        }
    }

    fn collect(&mut self, adj: &[(u32, f64)], label: impl Fn(u32) -> Option<u32>) {
        for &(u, w) in adj {
            if let Some(c) = label(u) {
                let ci = c as usize;
                if !self.seen[ci] {
                    self.seen[ci] = true;
                    self.touched.push(c);
                }
                self.weight[ci] += w;
            }
        }
        self.touched.sort_unstable();
    }

    fn get(&self, c: u32) -> f64 {
        self.weight[c as usize]
    }

    fn clear(&mut self) {
        for &c in &self.touched {
            self.weight[c as usize] = 0.0;
            self.seen[c as usize] = false;
        }
        self.touched.clear();
    }
}

struct Communities {
    weight: Vec<f64>,
    count: Vec<u32>,
    empty: Vec<u32>,
}

impl Communities {
    fn new(net: &Network, part: &[u32]) -> Self {
        let n = net.len();
        let mut weight = vec![0.0; n];
        let mut count = vec![0u32; n];
        for (v, &c) in part.iter().enumerate() {
            weight[c as usize] += net.node_w[v];
            count[c as usize] += 1;
        }
        let empty = (0..n as u32).rev().filter(|&c| count[c as usize] == 0).collect();
        Communities { weight, count, empty }
    }
}

/// Best community for `v` given `part`, or `None` if staying is optimal.
/// `v` must already be removed from `comms`.
fn best_move(
    v: usize,
    current: u32,
    net: &Network,
    gamma: f64,
    comms: &Communities,
    nw: &NeighborWeights,
) -> Option<u32> {
    let wv = net.node_w[v];
    let gain = |c: u32| nw.get(c) - gamma * wv * comms.weight[c as usize];
    let stay = gain(current);
    let mut best: Option<(f64, u32)> = None;
    for &c in &nw.touched {
        if c == current {
            continue;
        }
        let g = gain(c);
        if best.is_none_or(|(bg, _)| g > bg + EPS) {
            best = Some((g, c));
        }
    }
    if comms.count[current as usize] > 0 {
        let alone = 0.0;
        if best.is_none_or(|(bg, _)| alone > bg + EPS) {
            best = comms.empty.last().map(|&c| (alone, c));
        }
    }
    match best {
        Some((g, c)) if g > stay + EPS => Some(c),
        _ => None,
    }
}

/// Queue-driven local moving followed by full verification sweeps. Returns
/// true if any node moved. On return no single node move improves quality.
fn move_nodes(net: &Network, gamma: f64, part: &mut [u32], rng: &mut ChaCha8Rng) -> bool {
    let n = net.len();
    renumber(part);
    let mut comms = Communities::new(net, part);
    let mut nw = NeighborWeights::new(n);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut in_queue = vec![true; n];
    let mut queue: VecDeque<u32> = order.into_iter().collect();
    let mut moved_any = false;

    loop {
        while let Some(v) = queue.pop_front() {
            let vi = v as usize;
            in_queue[vi] = false;
            let cv = part[vi];
            let wv = net.node_w[vi];
            nw.collect(&net.adj[vi], |u| Some(part[u as usize]));
            comms.weight[cv as usize] -= wv;
            comms.count[cv as usize] -= 1;
            let target = best_move(vi, cv, net, gamma, &comms, &nw).unwrap_or(cv);
            nw.clear();

            if target != cv {
                if comms.count[cv as usize] == 0 {
                    comms.empty.push(cv);
                }
                if comms.count[target as usize] == 0 {
                    let pos = comms.empty.iter().rposition(|&c| c == target).unwrap();
                    comms.empty.remove(pos);
                }
                part[vi] = target;
                moved_any = true;
                for &(u, _) in &net.adj[vi] {
                    let ui = u as usize;
                    if part[ui] != target && !in_queue[ui] {
                        in_queue[ui] = true;
                        queue.push_back(u);
                    }
                }
            }
            comms.weight[target as usize] += wv;
            comms.count[target as usize] += 1;
        }

        // community weights change on every move, which can make
        // non-neighbors want to leave; re-check everyone
        for v in 0..n {
            let cv = part[v];
            nw.collect(&net.adj[v], |u| Some(part[u as usize]));
            comms.weight[cv as usize] -= net.node_w[v];
            comms.count[cv as usize] -= 1;
            if best_move(v, cv, net, gamma, &comms, &nw).is_some() {
                in_queue[v] = true;
                queue.push_back(v as u32);
            }
            comms.weight[cv as usize] += net.node_w[v];
            comms.count[cv as usize] += 1;
            nw.clear();
        }
        if queue.is_empty() {
            return moved_any;
        }
    }
}

/// Split each community into well-connected, connected sub-communities by
/// greedy merging of singletons.
fn refine(net: &Network, gamma: f64, part: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let n = net.len();
    let mut comm_w = vec![0.0; n];
    for v in 0..n {
        comm_w[part[v] as usize] += net.node_w[v];
    }
    let mut refined: Vec<u32> = (0..n as u32).collect();
    let mut ref_w = net.node_w.clone();
    let mut ref_count = vec![1u32; n];
    // weight from each refined community to the rest of its community
    let mut ref_ext: Vec<f64> = (0..n)
        .map(|v| {
            net.adj[v]
                .iter()
                .filter(|&&(u, _)| part[u as usize] == part[v])
                .map(|&(_, w)| w)
                .sum()
        })
        .collect();

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut nw = NeighborWeights::new(n);
    for v in order {
        let vi = v as usize;
        if ref_count[refined[vi] as usize] != 1 {
            continue;
        }
        let c = part[vi];
        let total = comm_w[c as usize];
        let wv = net.node_w[vi];
        if ref_ext[vi] + EPS < gamma * wv * (total - wv) {
            continue;
        }
        nw.collect(&net.adj[vi], |u| {
            (part[u as usize] == c && refined[u as usize] != v).then(|| refined[u as usize])
        });
        let mut best: Option<(f64, u32)> = None;
        for &t in &nw.touched {
            let tw = ref_w[t as usize];
            if ref_ext[t as usize] + EPS < gamma * tw * (total - tw) {
                continue;
            }
            let g = nw.get(t) - gamma * wv * tw;
            if g >= -EPS && best.is_none_or(|(bg, _)| g > bg + EPS) {
                best = Some((g, t));
            }
        }
        if let Some((_, t)) = best {
            let ti = t as usize;
            ref_ext[ti] += ref_ext[vi] - 2.0 * nw.get(t);
            ref_w[ti] += wv;
            ref_count[ti] += 1;
            ref_count[vi] = 0;
            refined[vi] = t;
        }
        nw.clear();
    }
    refined
}

/// One multi-level pass starting from `init`; returns a partition of the
/// base network.
fn leiden_pass(base: &Network, gamma: f64, init: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut net = base.clone();
    let mut part = init.to_vec();
    let mut level_of: Vec<u32> = (0..base.len() as u32).collect();
    loop {
        move_nodes(&net, gamma, &mut part, rng);
        let communities = renumber(&mut part);
        if communities == net.len() {
            break;
        }
        let mut refined = refine(&net, gamma, &part, rng);
        let k = renumber(&mut refined);
        let (by, k, next_part) = if k < net.len() {
            let mut next = vec![0u32; k];
            for v in 0..net.len() {
                next[refined[v] as usize] = part[v];
            }
            (refined, k, next)
        } else {
            (part.clone(), communities, (0..communities as u32).collect())
        };
        net = net.aggregate(&by, k);
        for l in level_of.iter_mut() {
            *l = by[*l as usize];
        }
        part = next_part;
    }
    level_of.iter().map(|&l| part[l as usize]).collect()
}

/// Split every community into its connected pieces. Returns true if any
/// community was split.
fn split_disconnected(net: &Network, part: &mut [u32]) -> bool {
    let n = net.len();
    let before = renumber(part);
    let mut piece = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for s in 0..n {
        if piece[s] != u32::MAX {
            continue;
        }
        piece[s] = next;
        stack.push(s as u32);
        while let Some(v) = stack.pop() {
            for &(u, _) in &net.adj[v as usize] {
                let ui = u as usize;
                if piece[ui] == u32::MAX && part[ui] == part[s] {
                    piece[ui] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    part.copy_from_slice(&piece);
    next as usize > before
}

fn gamma_for(g: &Graph, objective: Objective) -> f64 {
    match objective {
        Objective::Cpm(r) => r,
        Objective::Modularity => 1.0 / (2.0 * g.edge_count() as f64),
    }
}

/// Heuristically maximize the objective over partitions of `g`.
///
/// Every returned cluster induces a connected subgraph, no single node
/// move improves the objective, and the result depends only on `g`,
/// `objective` and `seed`. Singleton communities are left implicit.
pub fn cluster_quality_opt(g: &Graph, objective: Objective, seed: u64) -> Clustering {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return Clustering::new(n);
    }
    let gamma = gamma_for(g, objective);
    let base = Network::from_graph(g, objective);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut part: Vec<u32> = (0..n as u32).collect();
    for _ in 0..MAX_PASSES {
        let mut next = leiden_pass(&base, gamma, &part, &mut rng);
        renumber(&mut next);
        if next == part {
            break;
        }
        part = next;
    }
    loop {
        move_nodes(&base, gamma, &mut part, &mut rng);
        if !split_disconnected(&base, &mut part) {
            break;
        }
    }
    Clustering::from_membership(&part)
}
