use std::collections::HashSet;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{seeded, Rng};

/// Undirected linear preferential-attachment graph.
///
/// Growth starts from a clique on `m_per_node + 1` nodes; each later node
/// links to `m_per_node` distinct existing nodes chosen with probability
/// proportional to their current degree. The degree distribution tends to
/// `p(k) ~ k^-3` and the minimum degree is `m_per_node`.
pub fn generate_price(n: usize, m_per_node: usize, seed: u64) -> Result<Graph> {
    if m_per_node < 1 || n <= m_per_node {
        return Err(Error::Parameter(format!(
            "price graph needs n > m_per_node >= 1 (n = {n}, m_per_node = {m_per_node})"
        )));
    }
    if n > NodeId::MAX as usize {
        return Err(Error::Parameter(format!("n = {n} exceeds the id space")));
    }
    let mut rng = seeded(seed);
    Ok(grow(n, m_per_node, &mut rng))
}

fn grow(n: usize, m: usize, rng: &mut Rng) -> Graph {
    let seed_nodes = m + 1;
    let total = m * (m + 1) / 2 + (n - seed_nodes) * m;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(total);
    // every edge endpoint once: sampling an entry uniformly picks a node
    // proportionally to its degree
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * total);
    for i in 0..seed_nodes as NodeId {
        for j in (i + 1)..seed_nodes as NodeId {
            edges.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut chosen: HashSet<NodeId> = HashSet::with_capacity(m);
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for v in seed_nodes as NodeId..n as NodeId {
        chosen.clear();
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if chosen.insert(t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    edges.sort_unstable();
    Graph::from_sorted_unique(n, &edges)
}
