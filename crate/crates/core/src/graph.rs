// SPDX-License-Identifier: Apache-2.0

//! Undirected simple graphs over dense node ids with external labels.
//!
//! A [`Graph`] is immutable once built. Neighbor lists are stored in a
//! compressed sparse row layout and are sorted, so iteration order is
//! deterministic. Every node carries the label it had in the input file;
//! induced subgraphs keep the labels of their parent.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Dense internal node id in `0..node_count`.
pub type NodeId = u32;

/// Sorted, duplicate-free set of node ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(Vec::new())
    }

    /// Build from arbitrary ids; sorts and removes duplicates.
    pub fn from_unsorted(mut ids: Vec<NodeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        NodeSet(ids)
    }

    /// All ids `0..n`.
    pub fn full(n: usize) -> Self {
        NodeSet((0..n as NodeId).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<NodeId> {
        self.0
    }

    /// True if every element of `self` is in `other`.
    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// Translate ids through `map` (e.g. subgraph id -> parent id).
    pub fn map_through(&self, map: &[NodeId]) -> NodeSet {
        NodeSet::from_unsorted(self.0.iter().map(|&v| map[v as usize]).collect())
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        NodeSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = &'a NodeId;
    type IntoIter = std::slice::Iter<'a, NodeId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Orders labels numerically when both parse as integers, otherwise
/// lexicographically; integers sort before non-integers.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Undirected simple graph.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Vec<Arc<str>>,
    index: OnceLock<HashMap<Arc<str>, NodeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets && self.targets == other.targets && self.labels == other.labels
    }
}

impl Eq for Graph {}

/// Counts of input records discarded while loading an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Graph with no nodes.
    pub fn empty() -> Self {
        Graph::from_parts(Vec::new(), Vec::new())
    }

    /// Build a graph on `n` nodes labelled `"0".."n-1"` from id pairs.
    /// Self-loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let labels = (0..n).map(|i| Arc::<str>::from(i.to_string())).collect();
        Graph::from_parts(labels, edges.to_vec())
    }

    fn from_parts(labels: Vec<Arc<str>>, edges: Vec<(NodeId, NodeId)>) -> Self {
        let n = labels.len();
        let mut degree = vec![0usize; n];
        let mut clean = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
            if u == v {
                continue;
            }
            clean.push(if u < v { (u, v) } else { (v, u) });
        }
        clean.sort_unstable();
        clean.dedup();
        for &(u, v) in &clean {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in &clean {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            targets,
            labels,
            index: OnceLock::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.nodes().map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.nodes().map(|v| self.degree(v)).max()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.labels.len() as NodeId
    }

    /// Every edge once, as `(u, v)` with `u < v` by id.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[Arc<str>] {
        &self.labels
    }

    /// Internal id of an external label.
    pub fn id_of(&self, label: &str) -> Option<NodeId> {
        self.index
            .get_or_init(|| {
                self.labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), i as NodeId))
                    .collect()
            })
            .get(label)
            .copied()
    }

    /// Smallest label (by [`label_cmp`]) among `nodes`.
    pub fn min_label<'a>(&'a self, nodes: &NodeSet) -> Option<&'a str> {
        nodes
            .iter()
            .map(|v| self.label(v))
            .min_by(|a, b| label_cmp(a, b))
    }

    fn check_ids(&self, nodes: &NodeSet) -> Result<()> {
        match nodes.as_slice().last() {
            Some(&v) if v as usize >= self.node_count() => Err(Error::InvalidArgument(format!(
                "node id {v} out of range for graph with {} nodes",
                self.node_count()
            ))),
            _ => Ok(()),
        }
    }
}

/// Incremental construction from labelled edges.
#[derive(Default)]
pub struct GraphBuilder {
    labels: Vec<Arc<str>>,
    index: HashMap<Arc<str>, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    stats: LoadStats,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern a label, assigning the next dense id on first sight.
    pub fn add_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len() as NodeId;
        let label: Arc<str> = Arc::from(label);
        self.labels.push(label.clone());
        self.index.insert(label, id);
        id
    }

    pub fn add_edge(&mut self, a: &str, b: &str) {
        let u = self.add_node(a);
        let v = self.add_node(b);
        if u == v {
            self.stats.self_loops += 1;
        } else {
            self.edges.push((u, v));
        }
    }

    pub fn build(self) -> (Graph, LoadStats) {
        let mut stats = self.stats;
        let kept = self.edges.len();
        let graph = Graph::from_parts(self.labels, self.edges);
        stats.duplicates = kept - graph.edge_count();
        let _ = graph.index.set(self.index);
        (graph, stats)
    }
}

/// Parse a whitespace-separated edge list. Lines starting with `#` and blank
/// lines are skipped.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<(Graph, LoadStats)> {
    let mut builder = GraphBuilder::new();
    let mut lines = 0;
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => builder.add_edge(a, b),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!(
                        "expected two endpoint labels, found {} tokens",
                        trimmed.split_whitespace().count()
                    ),
                })
            }
        }
        lines += 1;
    }
    let (graph, mut stats) = builder.build();
    stats.lines = lines;
    Ok((graph, stats))
}

/// Write the cleaned edge list as `u\tv` lines, `u < v` by label order,
/// sorted by `(u, v)`.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    let mut edges: Vec<(&str, &str)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (g.label(u), g.label(v));
            if label_cmp(a, b) == Ordering::Greater {
                (b, a)
            } else {
                (a, b)
            }
        })
        .collect();
    edges.sort_by(|x, y| label_cmp(x.0, y.0).then_with(|| label_cmp(x.1, y.1)));
    for (a, b) in edges {
        writeln!(out, "{a}\t{b}")?;
    }
    Ok(())
}

/// An induced subgraph together with the parent id of each of its nodes.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    pub parent: Vec<NodeId>,
}

impl Subgraph {
    /// Lift a node set of the subgraph back into parent ids.
    pub fn lift(&self, nodes: &NodeSet) -> NodeSet {
        nodes.map_through(&self.parent)
    }
}

/// Subgraph induced by `nodes`; labels are inherited from `g`.
pub fn induced_subgraph(g: &Graph, nodes: &NodeSet) -> Result<Graph> {
    induced_subgraph_mapped(g, nodes).map(|s| s.graph)
}

/// Like [`induced_subgraph`], also returning the id mapping. Subgraph node
/// `i` is the `i`-th smallest id of `nodes`.
pub fn induced_subgraph_mapped(g: &Graph, nodes: &NodeSet) -> Result<Subgraph> {
    g.check_ids(nodes)?;
    let mut local = vec![NodeId::MAX; g.node_count()];
    for (i, v) in nodes.iter().enumerate() {
        local[v as usize] = i as NodeId;
    }
    let n = nodes.len();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    let mut targets = Vec::new();
    for v in nodes.iter() {
        // parent neighbor lists are sorted and the id map is monotone, so
        // the filtered list stays sorted
        targets.extend(
            g.neighbors(v)
                .iter()
                .map(|&w| local[w as usize])
                .filter(|&w| w != NodeId::MAX),
        );
        offsets.push(targets.len());
    }
    let labels = nodes.iter().map(|v| g.labels[v as usize].clone()).collect();
    Ok(Subgraph {
        graph: Graph {
            offsets,
            targets,
            labels,
            index: OnceLock::new(),
        },
        parent: nodes.as_slice().to_vec(),
    })
}

/// Component id of every node, numbered in order of smallest node id.
pub fn component_ids(g: &Graph) -> (Vec<u32>, usize) {
    let n = g.node_count();
    let mut comp = vec![u32::MAX; n];
    let mut count = 0u32;
    let mut stack = Vec::new();
    for s in g.nodes() {
        if comp[s as usize] != u32::MAX {
            continue;
        }
        comp[s as usize] = count;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count as usize)
}

/// Maximal connected node sets, largest first; equal sizes are ordered by
/// their smallest label.
pub fn connected_components(g: &Graph) -> Vec<NodeSet> {
    let (comp, count) = component_ids(g);
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); count];
    for v in g.nodes() {
        members[comp[v as usize] as usize].push(v);
    }
    // ids were pushed in increasing order
    let mut sets: Vec<NodeSet> = members.into_iter().map(NodeSet).collect();
    sets.sort_by(|a, b| {
        b.len().cmp(&a.len()).then_with(|| {
            label_cmp(
                g.min_label(a).unwrap_or_default(),
                g.min_label(b).unwrap_or_default(),
            )
        })
    });
    sets
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() <= 1 || component_ids(g).1 == 1
}

/// True iff `g` is connected and has exactly `n - 1` edges.
pub fn is_tree(g: &Graph) -> Result<bool> {
    if g.is_empty() {
        return Err(Error::InvalidArgument("is_tree on an empty graph".into()));
    }
    Ok(g.edge_count() + 1 == g.node_count() && is_connected(g))
}

/// Core number of every node, by bucket-based minimum-degree peeling.
pub fn core_decomposition(g: &Graph) -> Vec<u32> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut degree: Vec<usize> = g.nodes().map(|v| g.degree(v)).collect();
    let max_deg = *degree.iter().max().unwrap();
    // bin[d] = start of degree-d block within `order`
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &degree {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0 as NodeId; n];
    {
        let mut next = bin.clone();
        for v in 0..n {
            pos[v] = next[degree[v]];
            order[pos[v]] = v as NodeId;
            next[degree[v]] += 1;
        }
    }
    for i in 0..n {
        let v = order[i] as usize;
        for &w in g.neighbors(v as NodeId) {
            let w = w as usize;
            if degree[w] > degree[v] {
                let dw = degree[w];
                let pw = pos[w];
                let start = bin[dw];
                let u = order[start] as usize;
                if u != w {
                    order.swap(pw, start);
                    pos[u] = pw;
                    pos[w] = start;
                }
                bin[dw] += 1;
                degree[w] -= 1;
            }
        }
    }
    degree.into_iter().map(|d| d as u32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    fn load(text: &str) -> (Graph, LoadStats) {
        load_edge_list(text.as_bytes()).unwrap()
    }

    #[test]
    fn load_cleans_loops_and_duplicates() {
        let (g, stats) = load("a b\nb a\na a\na b\n");
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(stats.self_loops, 1);
        assert_eq!(stats.duplicates, 2);
        assert_eq!(g.label(0), "a");
        assert_eq!(g.id_of("b"), Some(1));
    }

    #[test]
    fn load_empty_and_comments() {
        let (g, _) = load("");
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
        let (g, stats) = load("# FromNodeId ToNodeId\n\n1\t2\n  # indented comment\n2 3\n");
        assert_eq!((g.node_count(), g.edge_count(), stats.lines), (3, 2, 2));
    }

    #[test]
    fn load_reports_malformed_line() {
        let err = load_edge_list("1 2\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_edge_list("1 2 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn induced_subgraph_cases() {
        let k5 = complete(5);
        let sub = induced_subgraph(&k5, &NodeSet::from_unsorted(vec![4, 0, 2])).unwrap();
        assert_eq!((sub.node_count(), sub.edge_count()), (3, 3));
        assert_eq!(sub.labels().iter().map(|l| &**l).collect::<Vec<_>>(), ["0", "2", "4"]);

        let (p, _) = load("a b\nb c\nc d\n");
        let ac = NodeSet::from_unsorted(vec![p.id_of("a").unwrap(), p.id_of("c").unwrap()]);
        let sub = induced_subgraph(&p, &ac).unwrap();
        assert_eq!((sub.node_count(), sub.edge_count()), (2, 0));

        assert_eq!(induced_subgraph(&p, &NodeSet::full(4)).unwrap(), p);
        assert!(matches!(
            induced_subgraph(&p, &NodeSet::from_unsorted(vec![7])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn components_ordering() {
        let g = disjoint_union(&[complete(3), complete(3)]);
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].as_slice(), &[0, 1, 2]);
        assert_eq!(connected_components(&complete(4)).len(), 1);
        let iso = Graph::from_edges(5, &[]);
        assert_eq!(connected_components(&iso).len(), 5);

        // size first, then smallest label numerically ("10" after "9")
        let (g, _) = load("10 11\n9 8\n1 2\n2 3\n");
        let comps = connected_components(&g);
        let firsts: Vec<_> = comps.iter().map(|c| g.min_label(c).unwrap()).collect();
        assert_eq!(firsts, ["1", "8", "10"]);
    }

    #[test]
    fn tree_checks() {
        assert!(is_tree(&path(15)).unwrap());
        assert!(!is_tree(&cycle(4)).unwrap());
        assert!(!is_tree(&Graph::from_edges(4, &[(0, 1), (2, 3)])).unwrap());
        assert!(is_tree(&Graph::from_edges(1, &[])).unwrap());
        assert!(is_tree(&Graph::empty()).is_err());
    }

    #[test]
    fn core_numbers() {
        assert!(core_decomposition(&complete(12)).iter().all(|&c| c == 11));
        assert!(core_decomposition(&star(30)).iter().all(|&c| c <= 1));
        let mut edges: Vec<_> = complete(5).edges().collect();
        edges.push((4, 5));
        let g = Graph::from_edges(6, &edges);
        assert_eq!(core_decomposition(&g), vec![4, 4, 4, 4, 4, 1]);
    }

    #[test]
    fn write_sorted_by_label() {
        let (g, _) = load("10 2\n2 1\n");
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1\t2\n2\t10\n");
    }
}
