//! LFR benchmark graphs with planted communities.
//!
//! Degrees come from a power law `k^-tau1` capped at `max_degree` and tuned to
//! the requested mean; community sizes from a power law `n^-tau2` on
//! `[min_comm, max_comm]`. Every node keeps `(1 - mu) * k` of its edges inside
//! its own community (stochastic rounding) and sends the rest to other
//! communities. Internal stubs are matched per community and external stubs
//! globally, with rewiring against self-loops, multi-edges and, for external
//! stubs, same-community pairs.

use std::collections::HashSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{seeded, Rng};

use super::powerlaw::{powerlaw_degrees, TruncatedPowerLaw};
use super::stubs::match_stubs;

/// Placement retries before giving up.
pub const MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfrParams {
    pub n: usize,
    /// Degree exponent.
    pub tau1: f64,
    /// Community-size exponent.
    pub tau2: f64,
    /// Fraction of each node's edges leaving its community.
    pub mu: f64,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub min_comm: usize,
    pub max_comm: usize,
}

impl LfrParams {
    /// The setting used for the community-structure experiments: 3000 nodes,
    /// mean degree 25, degrees capped at 1000, communities of 100 to 1000.
    pub fn standard(tau1: f64, mu: f64) -> Self {
        LfrParams {
            n: 3000,
            tau1,
            tau2: 3.0,
            mu,
            avg_degree: 25.0,
            max_degree: 1000,
            min_comm: 100,
            max_comm: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if self.tau1.is_nan() || self.tau1 <= 1.0 || self.tau2.is_nan() || self.tau2 <= 1.0 {
            return bad(format!("exponents must exceed 1 (tau1 = {}, tau2 = {})", self.tau1, self.tau2));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu = {} outside [0, 1]", self.mu));
        }
        if self.min_comm < 1 || self.min_comm > self.max_comm || self.max_comm > self.n {
            return bad(format!(
                "community sizes need 1 <= min_comm <= max_comm <= n (got {}, {}, {})",
                self.min_comm, self.max_comm, self.n
            ));
        }
        if self.avg_degree.is_nan() || self.avg_degree <= 0.0 || self.avg_degree > self.max_degree as f64 {
            return bad(format!(
                "avg_degree = {} must lie in (0, max_degree = {}]",
                self.avg_degree, self.max_degree
            ));
        }
        if self.n > NodeId::MAX as usize {
            return bad(format!("n = {} exceeds the id space", self.n));
        }
        Ok(())
    }
}

/// Community id per node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityLabels {
    pub labels: Vec<usize>,
}

impl CommunityLabels {
    pub fn num_communities(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities()];
        for &c in &self.labels {
            sizes[c] += 1;
        }
        sizes
    }

    /// Fraction of edges whose endpoints lie in different communities.
    pub fn mixing(&self, g: &Graph) -> f64 {
        if g.num_edges() == 0 {
            return 0.0;
        }
        let crossing = g
            .edges()
            .filter(|&(i, j)| self.labels[i as usize] != self.labels[j as usize])
            .count();
        crossing as f64 / g.num_edges() as f64
    }
}

pub fn generate_lfr(params: &LfrParams, seed: u64) -> Result<(Graph, CommunityLabels)> {
    params.validate()?;
    let mut rng = seeded(seed);
    let n = params.n;

    // feasibility is judged on the drawn sequence: a node whose internal
    // degree reaches max_comm has no community, so the sequence is redrawn
    let mut attempt = 0;
    let (mut degrees, mut internal) = loop {
        let degrees = powerlaw_degrees(n, params.tau1, 1, params.max_degree, Some(params.avg_degree), &mut rng)?;
        let internal: Vec<usize> = degrees
            .iter()
            .map(|&k| {
                let x = (1.0 - params.mu) * k as f64;
                let base = x.floor();
                let up = rng.random::<f64>() < x - base;
                base as usize + up as usize
            })
            .collect();
        let max_internal = internal.iter().copied().max().unwrap_or(0);
        if max_internal < params.max_comm {
            break (degrees, internal);
        }
        attempt += 1;
        if attempt == MAX_RETRIES {
            return Err(Error::Generation(format!(
                "internal degree {max_internal} does not fit in communities of at most {} after {MAX_RETRIES} draws",
                params.max_comm
            )));
        }
    };

    let (sizes, labels) = place_nodes(params, &internal, &mut rng)?;

    // an odd internal stub total inside a community turns one external stub
    // of a member internal, or drops a stub if no member has one to spare
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); sizes.len()];
    for (v, &c) in labels.iter().enumerate() {
        members[c].push(v as NodeId);
    }
    for m in &members {
        let total: usize = m.iter().map(|&v| internal[v as usize]).sum();
        if total % 2 == 1 {
            let spare: Vec<NodeId> = m
                .iter()
                .copied()
                .filter(|&v| degrees[v as usize] > internal[v as usize] && internal[v as usize] + 1 < sizes[labels[v as usize]])
                .collect();
            if let Some(&v) = spare.choose(&mut rng) {
                internal[v as usize] += 1;
            } else {
                let candidates: Vec<NodeId> = m.iter().copied().filter(|&v| internal[v as usize] > 0).collect();
                let v = *candidates.choose(&mut rng).expect("odd total implies a stub") as usize;
                internal[v] -= 1;
                degrees[v] -= 1;
            }
        }
    }

    let mut set: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for m in &members {
        let stubs: Vec<NodeId> = m
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, internal[v as usize]))
            .collect();
        let (placed, _) = match_stubs(stubs, |_, _| true, &mut set, &mut rng);
        edges.extend(placed);
    }
    let external: Vec<NodeId> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v as NodeId, degrees[v] - internal[v]))
        .collect();
    let (placed, _) = match_stubs(
        external,
        |u, v| labels[u as usize] != labels[v as usize],
        &mut set,
        &mut rng,
    );
    edges.extend(placed);

    edges.sort_unstable();
    let g = Graph::from_sorted_unique(n, &edges);
    Ok((g, CommunityLabels { labels }))
}

/// Draws community sizes and assigns nodes to them.
///
/// One community is drawn from the tail `[max_internal + 1, max_comm]` so the
/// node with the largest internal degree has somewhere to live; the others are
/// drawn from the full range until they cover `n`, and the last one is
/// truncated to fit. Nodes are then placed in decreasing order of internal
/// degree into communities strictly larger than that degree, chosen with
/// probability proportional to free capacity.
fn place_nodes(params: &LfrParams, internal: &[usize], rng: &mut Rng) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = params.n;
    let max_internal = internal.iter().copied().max().unwrap_or(0);
    let need = (max_internal + 1).max(params.min_comm);
    if need > params.max_comm {
        return Err(Error::Generation(format!(
            "internal degree {max_internal} exceeds the largest community size {}",
            params.max_comm
        )));
    }
    let tail = TruncatedPowerLaw::new(need, params.max_comm, params.tau2)?;
    let full = TruncatedPowerLaw::new(params.min_comm, params.max_comm, params.tau2)?;

    let mut order: Vec<usize> = (0..n).collect();
    let mut last_failure = String::new();
    for _ in 0..MAX_RETRIES {
        let mut sizes = vec![tail.sample(1, rng)[0]];
        let mut total = sizes[0];
        while total < n {
            let s = full.sample(1, rng)[0];
            sizes.push(s);
            total += s;
        }
        let excess = total - n;
        let last = sizes.last_mut().expect("nonempty");
        *last -= excess.min(*last);
        if sizes.len() > 1 && *sizes.last().unwrap() < params.min_comm {
            last_failure = format!(
                "last community truncated below min_comm = {}",
                params.min_comm
            );
            continue;
        }

        order.shuffle(rng);
        order.sort_by_key(|&v| std::cmp::Reverse(internal[v]));
        let mut free = sizes.clone();
        let mut labels = vec![usize::MAX; n];
        let mut ok = true;
        for &v in &order {
            let eligible: Vec<usize> = (0..sizes.len())
                .filter(|&c| free[c] > 0 && sizes[c] > internal[v])
                .collect();
            let capacity: usize = eligible.iter().map(|&c| free[c]).sum();
            if capacity == 0 {
                last_failure = format!("no community can host a node of internal degree {}", internal[v]);
                ok = false;
                break;
            }
            let mut pick = rng.random_range(0..capacity);
            let mut chosen = eligible[0];
            for &c in &eligible {
                if pick < free[c] {
                    chosen = c;
                    break;
                }
                pick -= free[c];
            }
            labels[v] = chosen;
            free[chosen] -= 1;
        }
        if ok {
            return Ok((sizes, labels));
        }
    }
    Err(Error::Generation(format!(
        "node placement failed after {MAX_RETRIES} retries: {last_failure}"
    )))
}
