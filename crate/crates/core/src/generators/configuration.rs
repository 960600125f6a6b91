use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::seeded;

use super::powerlaw::sample_lognormal_degrees;
use super::stubs::match_stubs;

/// Simple graph whose degrees follow `degrees` up to rewiring slack.
///
/// Stubs are matched uniformly at random; self-loops and multi-edges are
/// rewired, and the few stubs that cannot be placed are discarded.
pub fn generate_configuration(degrees: &[usize], seed: u64) -> Result<Graph> {
    let n = degrees.len();
    if n > NodeId::MAX as usize {
        return Err(Error::Parameter(format!("{n} nodes exceed the id space")));
    }
    let stubs: Vec<NodeId> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v as NodeId, k))
        .collect();
    let mut rng = seeded(seed);
    let mut set = HashSet::with_capacity(stubs.len() / 2);
    let (mut edges, _) = match_stubs(stubs, |_, _| true, &mut set, &mut rng);
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, &edges))
}

/// Configuration-model graph with log-normal degrees,
/// `k = ceil(exp(x))`, `x ~ Normal(mu, sigma^2)`.
pub fn generate_lognormal(n: usize, mu: f64, sigma: f64, seed: u64) -> Result<Graph> {
    let degrees = sample_lognormal_degrees(n, mu, sigma, seed)?;
    generate_configuration(&degrees, seed.wrapping_add(1))
}
