// SPDX-License-Identifier: Apache-2.0

//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's own quality or cut routines.

#![allow(dead_code)]

use connmod_core::{Graph, NodeId};

/// Every set partition of `0..n` as a restricted growth string.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[u32])) {
    if n == 0 {
        f(&[]);
        return;
    }
    let mut a = vec![0u32; n];
    // max label used among a[..i], per prefix
    let mut m = vec![0u32; n];
    loop {
        f(&a);
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if a[i] <= m[i - 1] {
                a[i] += 1;
                m[i] = m[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    m[j] = m[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in g.nodes() {
        for &w in g.neighbors(v) {
            if v < w {
                out.push((v as usize, w as usize));
            }
        }
    }
    out
}

/// `Σ_c e_c − r·C(n_c, 2)` straight from a membership vector.
pub fn cpm_of(edges: &[(usize, usize)], membership: &[u32], r: f64) -> f64 {
    let k = membership.iter().max().map_or(0, |&x| x as usize + 1);
    let mut size = vec![0usize; k];
    for &c in membership {
        size[c as usize] += 1;
    }
    let internal = edges
        .iter()
        .filter(|&&(u, v)| membership[u] == membership[v])
        .count() as f64;
    internal - r * size.iter().map(|&s| (s * s.saturating_sub(1)) as f64 / 2.0).sum::<f64>()
}

/// `Σ_c e_c/m − (d_c/2m)^2` straight from a membership vector.
pub fn modularity_of(edges: &[(usize, usize)], n: usize, membership: &[u32]) -> f64 {
    let m = edges.len() as f64;
    let k = membership.iter().max().map_or(0, |&x| x as usize + 1);
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let mut e = vec![0.0; k];
    let mut d = vec![0.0; k];
    for &(u, v) in edges {
        if membership[u] == membership[v] {
            e[membership[u] as usize] += 1.0;
        }
    }
    for v in 0..n {
        d[membership[v] as usize] += deg[v] as f64;
    }
    (0..k).map(|c| e[c] / m - (d[c] / (2.0 * m)).powi(2)).sum()
}

/// Best value of `score` over all set partitions, and every partition
/// attaining it (within `tol`).
pub fn brute_optimum(n: usize, tol: f64, score: impl Fn(&[u32]) -> f64) -> (f64, Vec<Vec<u32>>) {
    let mut best = f64::NEG_INFINITY;
    let mut argbest: Vec<Vec<u32>> = Vec::new();
    for_each_partition(n, |p| {
        let q = score(p);
        if q > best + tol {
            best = q;
            argbest.clear();
            argbest.push(p.to_vec());
        } else if q >= best - tol {
            argbest.push(p.to_vec());
        }
    });
    // entries kept before `best` rose by less than tol may be stale
    argbest.retain(|p| score(p) >= best - tol);
    (best, argbest)
}

fn adjacency_bits(n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Canonical code of a graph on `n <= 8` nodes: the smallest upper-triangle
/// bitmask over all relabelings that list vertices by ascending degree.
fn canonical(n: usize, adj: &[u32]) -> u64 {
    let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| deg[v]);
    // blocks of equal degree may be permuted freely
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut s = 0;
    for i in 1..=n {
        if i == n || deg[order[i]] != deg[order[s]] {
            blocks.push((s, i));
            s = i;
        }
    }
    let mut best = u64::MAX;
    permute_blocks(&mut order, &blocks, 0, adj, &mut best);
    best
}

fn code(order: &[usize], adj: &[u32]) -> u64 {
    let n = order.len();
    let mut c = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[order[i]] >> order[j] & 1 == 1 {
                c |= 1 << bit;
            }
            bit += 1;
        }
    }
    c
}

fn permute_blocks(order: &mut [usize], blocks: &[(usize, usize)], b: usize, adj: &[u32], best: &mut u64) {
    if b == blocks.len() {
        *best = (*best).min(code(order, adj));
        return;
    }
    let (lo, hi) = blocks[b];
    heap_permute(order, lo, hi - lo, &mut |o| permute_blocks(o, blocks, b + 1, adj, best));
}

fn heap_permute(order: &mut [usize], lo: usize, k: usize, f: &mut dyn FnMut(&mut [usize])) {
    if k <= 1 {
        f(order);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(order, lo, k - 1, f);
        if k & 1 == 0 {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
    heap_permute(order, lo, k - 1, f);
}

/// `(n, edges)` for one graph.
pub type Shape = (usize, Vec<(usize, usize)>);

/// One representative edge list per isomorphism class of graphs on exactly
/// `n` nodes, built by adding a vertex to each class on `n - 1` nodes.
pub fn nonisomorphic_graphs(max_n: usize) -> Vec<Vec<Shape>> {
    let mut levels = vec![vec![(0usize, Vec::new())]];
    for n in 1..=max_n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for (_, edges) in &levels[n - 1] {
            for mask in 0u32..(1 << (n - 1)) {
                let mut e = edges.clone();
                for u in 0..n - 1 {
                    if mask >> u & 1 == 1 {
                        e.push((u, n - 1));
                    }
                }
                if seen.insert(canonical(n, &adjacency_bits(n, &e))) {
                    next.push((n, e));
                }
            }
        }
        levels.push(next);
    }
    levels
}

pub fn graph_of(n: usize, edges: &[(usize, usize)]) -> Graph {
    let e: Vec<(NodeId, NodeId)> = edges.iter().map(|&(u, v)| (u as NodeId, v as NodeId)).collect();
    Graph::from_edges(n, &e)
}

/// Edges between `a` (bitmask) and its complement.
pub fn cut_size(edges: &[(usize, usize)], a: u32) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| (a >> u & 1) != (a >> v & 1))
        .count()
}
