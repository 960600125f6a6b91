//! Immutable simple undirected graphs in compressed sparse row form.
//!
//! A [`Graph`] stores, for every node, the strictly increasing list of its
//! neighbours. Each undirected edge therefore appears twice, once per
//! endpoint, and `sum(degree) == 2 * num_edges` always holds. Self-loops and
//! multi-edges cannot be represented; [`build_graph`] drops them and reports
//! how many it saw.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node identifier, `0..num_nodes`.
pub type NodeId = u32;

/// An ordered list of node pairs, each stored as `(min, max)`.
///
/// The list order is kept as given (samplers rely on it for determinism); only
/// the orientation of each pair is canonicalised. A pair may still be a
/// self-loop `(i, i)`; such pairs never survive [`build_graph`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeList {
    pairs: Vec<(NodeId, NodeId)>,
}

impl EdgeList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            pairs: Vec::with_capacity(n),
        }
    }

    /// Appends `(i, j)` in canonical orientation.
    pub fn push(&mut self, i: NodeId, j: NodeId) {
        self.pairs.push(canonical(i, j));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.pairs.iter().copied()
    }

    /// Largest node id referenced, if any.
    pub fn max_node(&self) -> Option<NodeId> {
        self.pairs.iter().map(|&(_, j)| j).max()
    }

    /// Returns a copy sorted lexicographically with duplicates removed.
    pub fn sorted_unique(&self) -> EdgeList {
        let mut pairs = self.pairs.clone();
        pairs.sort_unstable();
        pairs.dedup();
        EdgeList { pairs }
    }
}

impl FromIterator<(NodeId, NodeId)> for EdgeList {
    fn from_iter<T: IntoIterator<Item = (NodeId, NodeId)>>(iter: T) -> Self {
        EdgeList {
            pairs: iter.into_iter().map(|(i, j)| canonical(i, j)).collect(),
        }
    }
}

impl From<Vec<(NodeId, NodeId)>> for EdgeList {
    fn from(v: Vec<(NodeId, NodeId)>) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a EdgeList {
    type Item = (NodeId, NodeId);
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, (NodeId, NodeId)>>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter().copied()
    }
}

#[inline]
pub(crate) fn canonical(i: NodeId, j: NodeId) -> (NodeId, NodeId) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

/// What [`build_graph`] discarded while constructing a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

/// Builds a graph from `pairs`.
///
/// `num_nodes` defaults to one past the largest id seen. Duplicate pairs and
/// self-loops are dropped and counted in the returned [`BuildReport`].
pub fn build_graph(pairs: &EdgeList, num_nodes: Option<usize>) -> Result<(Graph, BuildReport)> {
    let needed = pairs.max_node().map_or(0, |m| m as usize + 1);
    let n = match num_nodes {
        Some(n) if n < needed => {
            return Err(Error::Input(format!(
                "node id {} out of range for num_nodes = {n}",
                needed - 1
            )))
        }
        Some(n) => n,
        None => needed,
    };
    if n > NodeId::MAX as usize {
        return Err(Error::Input(format!("{n} nodes exceed the id space")));
    }

    let mut report = BuildReport::default();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        if i == j {
            report.self_loops_dropped += 1;
        } else {
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    report.duplicates_dropped = before - edges.len();

    Ok((Graph::from_sorted_unique(n, &edges), report))
}

impl Graph {
    /// `edges` must be canonical, sorted, unique and loop-free.
    pub(crate) fn from_sorted_unique(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        let mut deg = vec![0usize; n];
        for &(i, j) in edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &deg {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut targets = vec![0 as NodeId; acc];
        // Visiting edges in (i, j) order fills every row in increasing order:
        // row v first receives its smaller neighbours (as the j side of
        // earlier pairs) and then its larger ones.
        for &(i, j) in edges {
            targets[cursor[i as usize]] = j;
            cursor[i as usize] += 1;
            targets[cursor[j as usize]] = i;
            cursor[j as usize] += 1;
        }
        let g = Graph { offsets, targets };
        debug_assert!(g.rows_sorted());
        g
    }

    /// Graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    fn rows_sorted(&self) -> bool {
        (0..self.num_nodes()).all(|v| self.neighbors(v as NodeId).windows(2).all(|w| w[0] < w[1]))
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbours of `i`. Panics if `i` is out of range.
    #[inline]
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        let i = i as usize;
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Degree of `i`, without range checking beyond the slice bounds.
    #[inline]
    pub fn deg(&self, i: NodeId) -> usize {
        let i = i as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degree(&self, i: NodeId) -> Result<usize> {
        self.check(i)?;
        Ok(self.deg(i))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.num_nodes() == 0 {
            0.0
        } else {
            self.targets.len() as f64 / self.num_nodes() as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Edge membership by binary search, no range checking.
    #[inline]
    pub fn adjacent(&self, i: NodeId, j: NodeId) -> bool {
        // search the shorter row
        let (a, b) = if self.deg(i) <= self.deg(j) { (i, j) } else { (j, i) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> Result<bool> {
        self.check(i)?;
        self.check(j)?;
        Ok(i != j && self.adjacent(i, j))
    }

    pub(crate) fn check(&self, i: NodeId) -> Result<()> {
        if (i as usize) < self.num_nodes() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "node id {i} out of range (num_nodes = {})",
                self.num_nodes()
            )))
        }
    }

    pub(crate) fn check_pairs(&self, pairs: &EdgeList) -> Result<()> {
        match pairs.max_node() {
            Some(m) => self.check(m),
            None => Ok(()),
        }
    }

    /// Edges as canonical `(i, j)` pairs with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.num_nodes() as NodeId).flat_map(move |i| {
            let row = self.neighbors(i);
            let start = row.partition_point(|&j| j <= i);
            row[start..].iter().map(move |&j| (i, j))
        })
    }

    pub fn edge_list(&self) -> EdgeList {
        EdgeList {
            pairs: self.edges().collect(),
        }
    }

    /// Copy of the graph without the given edges. Node count is unchanged, so
    /// nodes that lose all their edges stay as isolated nodes.
    pub fn without_edges(&self, removed: &EdgeList) -> Graph {
        let mut drop = removed.pairs.clone();
        drop.sort_unstable();
        let kept: Vec<_> = self
            .edges()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Graph::from_sorted_unique(self.num_nodes(), &kept)
    }

    /// Connected component label per node, components numbered in order of
    /// their smallest node id.
    pub fn components(&self) -> Vec<usize> {
        let n = self.num_nodes();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s as NodeId);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if label[w as usize] == usize::MAX {
                        label[w as usize] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Largest connected component and the old-id to new-id map.
    ///
    /// Among equally large components the one holding the smallest node id
    /// wins. Node order is preserved in the relabelling.
    pub fn largest_connected_component(&self) -> (Graph, Vec<Option<NodeId>>) {
        let n = self.num_nodes();
        if n == 0 {
            return (Graph::empty(0), Vec::new());
        }
        let label = self.components();
        let ncomp = label.iter().max().map_or(0, |m| m + 1);
        let mut size = vec![0usize; ncomp];
        for &c in &label {
            size[c] += 1;
        }
        // components are numbered by smallest member, so the first maximum wins ties
        let best = (0..ncomp).fold(0, |b, c| if size[c] > size[b] { c } else { b });
        let mut map = vec![None; n];
        let mut next: NodeId = 0;
        for v in 0..n {
            if label[v] == best {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges: Vec<_> = self
            .edges()
            .filter_map(|(i, j)| Some((map[i as usize]?, map[j as usize]?)))
            .collect();
        (Graph::from_sorted_unique(next as usize, &edges), map)
    }
}

/// Relabels the ids used in `pairs` onto `0..n` preserving their order.
///
/// Returns the relabelled list and, for each new id, the original id.
pub fn compact_ids(pairs: &EdgeList) -> (EdgeList, Vec<NodeId>) {
    let mut ids: Vec<NodeId> = pairs.iter().flat_map(|(i, j)| [i, j]).collect();
    ids.sort_unstable();
    ids.dedup();
    let relabel = |v: NodeId| ids.binary_search(&v).expect("id collected above") as NodeId;
    let out = pairs.iter().map(|(i, j)| (relabel(i), relabel(j))).collect();
    (out, ids)
}
