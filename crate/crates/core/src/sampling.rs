//! Positive-edge holdout and negative-pair samplers.
//!
//! A benchmark split hides a uniform fraction `beta` of the edges (the
//! positives) and pairs them with the same number of unconnected node pairs
//! (the negatives). Sampling edges uniformly picks a node of degree `k` with
//! probability proportional to `k`, so positive endpoints follow the
//! size-biased law `k p(k) / <k>`. The [`SamplerKind::Uniform`] sampler draws
//! negative endpoints uniformly over nodes and therefore follows `p(k)`; the
//! [`SamplerKind::DegreeCorrected`] sampler draws each endpoint with
//! probability proportional to its degree, so both classes share the same
//! endpoint-degree law.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical, EdgeList, Graph, NodeId};
use crate::rng::{mix_seed, seeded};

/// Rejection attempts allowed per requested negative.
pub const ATTEMPTS_PER_NEGATIVE: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Uniform,
    DegreeCorrected,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 2] = [SamplerKind::Uniform, SamplerKind::DegreeCorrected];

    pub fn as_str(self) -> &'static str {
        match self {
            SamplerKind::Uniform => "uniform",
            SamplerKind::DegreeCorrected => "degree-corrected",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SamplerKind::Uniform),
            "degree-corrected" | "degree_corrected" => Ok(SamplerKind::DegreeCorrected),
            other => Err(Error::Parameter(format!("unknown sampler {other:?}"))),
        }
    }
}

/// A train graph with its held-out positives and sampled negatives.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSplit {
    pub train: Graph,
    pub positives: EdgeList,
    pub negatives: EdgeList,
    pub beta: f64,
    pub sampler: SamplerKind,
    pub seed: u64,
}

impl EdgeSplit {
    /// Holds out positives with `seed` and samples negatives from an
    /// independent stream derived from it.
    pub fn generate(g: &Graph, beta: f64, sampler: SamplerKind, seed: u64) -> Result<EdgeSplit> {
        let (train, positives) = split_positive(g, beta, seed)?;
        let negatives = sample_negatives(sampler, g, &positives, positives.len(), mix_seed(seed, 1))?;
        Ok(EdgeSplit {
            train,
            positives,
            negatives,
            beta,
            sampler,
            seed,
        })
    }

    /// Positives followed by negatives, with matching labels.
    pub fn labelled_pairs(&self) -> (EdgeList, Vec<bool>) {
        let pairs: EdgeList = self.positives.iter().chain(self.negatives.iter()).collect();
        let labels = std::iter::repeat_n(true, self.positives.len())
            .chain(std::iter::repeat_n(false, self.negatives.len()))
            .collect();
        (pairs, labels)
    }
}

/// Hides `round(beta * M)` edges chosen uniformly without replacement.
///
/// Nodes that lose all their edges stay in the train graph with degree 0.
pub fn split_positive(g: &Graph, beta: f64, seed: u64) -> Result<(Graph, EdgeList)> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter(format!("beta = {beta} outside (0, 1)")));
    }
    let edges: Vec<_> = g.edges().collect();
    let count = (beta * edges.len() as f64).round() as usize;
    let mut rng = seeded(seed);
    let picked = index::sample(&mut rng, edges.len(), count);
    let positives: EdgeList = picked.iter().map(|k| edges[k]).collect();
    let train = g.without_edges(&positives);
    Ok((train, positives))
}

pub fn sample_negatives(
    kind: SamplerKind,
    g: &Graph,
    positives: &EdgeList,
    count: usize,
    seed: u64,
) -> Result<EdgeList> {
    match kind {
        SamplerKind::Uniform => sample_negative_uniform(g, positives, count, seed),
        SamplerKind::DegreeCorrected => sample_negative_degree_corrected(g, positives, count, seed),
    }
}

/// `count` distinct unconnected pairs with both endpoints uniform over nodes.
///
/// A draw is rejected if it is a self-loop, an edge of `g`, one of
/// `positives`, or already sampled.
pub fn sample_negative_uniform(g: &Graph, positives: &EdgeList, count: usize, seed: u64) -> Result<EdgeList> {
    g.check_pairs(positives)?;
    let n = g.num_nodes() as u64;
    rejection_sample(g, positives, count, seed, |rng| {
        (rng.random_range(0..n) as NodeId, rng.random_range(0..n) as NodeId)
    })
}

/// `count` distinct unconnected pairs with endpoints drawn proportionally to
/// their degree in `g`, with the same rejection rule as
/// [`sample_negative_uniform`].
///
/// Pass the original graph, not the train graph: the endpoint weights are the
/// degrees before the positives were removed.
pub fn sample_negative_degree_corrected(
    g: &Graph,
    positives: &EdgeList,
    count: usize,
    seed: u64,
) -> Result<EdgeList> {
    g.check_pairs(positives)?;
    if count > 0 && g.num_edges() == 0 {
        return Err(Error::Parameter("degree-corrected sampling needs at least one edge".into()));
    }
    // cumulative degrees: drawing r uniformly in [0, 2M) and locating it is
    // the same as drawing from the list where node i appears k_i times
    let mut cum: Vec<u64> = Vec::with_capacity(g.num_nodes());
    let mut acc = 0u64;
    for k in g.degrees() {
        acc += k as u64;
        cum.push(acc);
    }
    let total = acc;
    let draw = move |rng: &mut crate::rng::Rng| -> NodeId {
        let r = rng.random_range(0..total);
        cum.partition_point(|&c| c <= r) as NodeId
    };
    rejection_sample(g, positives, count, seed, |rng| (draw(rng), draw(rng)))
}

fn rejection_sample<F>(g: &Graph, positives: &EdgeList, count: usize, seed: u64, mut draw: F) -> Result<EdgeList>
where
    F: FnMut(&mut crate::rng::Rng) -> (NodeId, NodeId),
{
    let n = g.num_nodes() as u64;
    let available = (n * n.saturating_sub(1) / 2).saturating_sub(g.num_edges() as u64);
    if count as u64 > available {
        return Err(Error::Input(format!(
            "{count} negatives requested but the graph has only {available} unconnected pairs"
        )));
    }
    // positives normally are edges of g already; keep any that are not
    let hidden: HashSet<(NodeId, NodeId)> = positives
        .iter()
        .filter(|&(i, j)| i != j && !g.adjacent(i, j))
        .collect();
    let mut rng = seeded(seed);
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(count);
    let mut out = EdgeList::with_capacity(count);
    let budget = ATTEMPTS_PER_NEGATIVE.saturating_mul(count as u64);
    let mut attempts = 0u64;
    while out.len() < count {
        if attempts >= budget {
            return Err(Error::Saturated {
                attempts,
                found: out.len(),
                wanted: count,
            });
        }
        attempts += 1;
        let (i, j) = draw(&mut rng);
        if i == j || g.adjacent(i, j) {
            continue;
        }
        let pair = canonical(i, j);
        if hidden.contains(&pair) || !seen.insert(pair) {
            continue;
        }
        out.push(pair.0, pair.1);
    }
    Ok(out)
}

/// Probability mass over degrees, indexed by `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHistogram {
    pub mass: Vec<f64>,
}

impl DegreeHistogram {
    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> DegreeHistogram {
        let mut counts: Vec<f64> = Vec::new();
        let mut total = 0.0;
        for k in degrees {
            if k >= counts.len() {
                counts.resize(k + 1, 0.0);
            }
            counts[k] += 1.0;
            total += 1.0;
        }
        if total > 0.0 {
            counts.iter_mut().for_each(|c| *c /= total);
        }
        DegreeHistogram { mass: counts }
    }

    /// Degree distribution `p(k)` over all nodes of `g`.
    pub fn of_graph(g: &Graph) -> DegreeHistogram {
        DegreeHistogram::from_degrees(g.degrees())
    }

    /// The size-biased law `k p(k) / <k>` followed by endpoints of uniformly
    /// sampled edges.
    pub fn size_biased(&self) -> DegreeHistogram {
        let mean = self.mean();
        let mass = self
            .mass
            .iter()
            .enumerate()
            .map(|(k, &p)| if mean > 0.0 { k as f64 * p / mean } else { 0.0 })
            .collect();
        DegreeHistogram { mass }
    }

    pub fn mean(&self) -> f64 {
        self.mass.iter().enumerate().map(|(k, &p)| k as f64 * p).sum()
    }

    /// `P(K >= k)`.
    pub fn ccdf(&self, k: usize) -> f64 {
        self.mass.get(k..).map_or(0.0, |t| t.iter().sum())
    }

    /// Largest absolute difference between the two cumulative distributions.
    pub fn ks_distance(&self, other: &DegreeHistogram) -> f64 {
        let len = self.mass.len().max(other.mass.len());
        let (mut a, mut b, mut d) = (0.0f64, 0.0f64, 0.0f64);
        for k in 0..len {
            a += self.mass.get(k).copied().unwrap_or(0.0);
            b += other.mass.get(k).copied().unwrap_or(0.0);
            d = d.max((a - b).abs());
        }
        d
    }
}

/// Distribution of `degree(v)` over both endpoint slots of every pair.
pub fn endpoint_degree_histogram(edges: &EdgeList, g: &Graph) -> Result<DegreeHistogram> {
    g.check_pairs(edges)?;
    Ok(DegreeHistogram::from_degrees(
        edges.iter().flat_map(|(i, j)| [g.deg(i), g.deg(j)]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn g(pairs: &[(NodeId, NodeId)], n: Option<usize>) -> Graph {
        build_graph(&EdgeList::from(pairs.to_vec()), n).unwrap().0
    }

    #[test]
    fn split_counts_and_partition() {
        let p = g(&[(0, 1), (1, 2)], None);
        let (train, pos) = split_positive(&p, 0.5, 3).unwrap();
        assert_eq!(pos.len(), 1);
        assert_eq!(train.num_edges(), 1);
        assert_eq!(train.num_nodes(), 3);
        assert!(split_positive(&p, 0.0, 0).is_err());
        assert!(split_positive(&p, 1.0, 0).is_err());
    }

    #[test]
    fn split_of_triangle_is_uniform() {
        let t = g(&[(0, 1), (1, 2), (0, 2)], None);
        let mut freq = std::collections::HashMap::new();
        for seed in 0..3000 {
            let (train, pos) = split_positive(&t, 1.0 / 3.0, seed).unwrap();
            assert_eq!(train.num_edges(), 2);
            *freq.entry(pos.pairs()[0]).or_insert(0usize) += 1;
        }
        assert_eq!(freq.len(), 3);
        for (&e, &c) in &freq {
            let f = c as f64 / 3000.0;
            assert!((f - 1.0 / 3.0).abs() < 0.03, "{e:?}: {f}");
        }
    }

    #[test]
    fn unique_non_edge_of_path() {
        let p = g(&[(0, 1), (1, 2)], None);
        for seed in 0..20 {
            let u = sample_negative_uniform(&p, &EdgeList::new(), 1, seed).unwrap();
            assert_eq!(u.pairs(), &[(0, 2)]);
            let d = sample_negative_degree_corrected(&p, &EdgeList::new(), 1, seed).unwrap();
            assert_eq!(d.pairs(), &[(0, 2)]);
        }
    }

    #[test]
    fn star_non_edges_exhausted() {
        let s = g(&[(0, 1), (0, 2), (0, 3)], None);
        for kind in SamplerKind::ALL {
            let neg = sample_negatives(kind, &s, &EdgeList::new(), 3, 1).unwrap();
            assert_eq!(neg.sorted_unique().pairs(), &[(1, 2), (1, 3), (2, 3)]);
        }
        assert!(sample_negative_uniform(&s, &EdgeList::new(), 4, 1).is_err());
    }

    #[test]
    fn degree_corrected_needs_edges() {
        let e = Graph::empty(4);
        assert!(matches!(
            sample_negative_degree_corrected(&e, &EdgeList::new(), 1, 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn saturation_is_reported() {
        let full = g(&[(0, 1)], Some(2));
        let err = sample_negative_uniform(&full, &EdgeList::new(), 1, 0).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        // non-edges are (1,2) and the pairs touching isolated node 3, which
        // degree-proportional draws never reach
        let dense = g(&[(0, 1), (0, 2)], Some(4));
        let err = sample_negative_degree_corrected(&dense, &EdgeList::new(), 2, 0).unwrap_err();
        assert!(matches!(err, Error::Saturated { found: 1, wanted: 2, .. }), "{err}");
    }

    #[test]
    fn hidden_positives_are_never_negatives() {
        let p = g(&[(0, 1), (1, 2), (2, 3)], None);
        let (train, pos) = split_positive(&p, 0.34, 5).unwrap();
        let neg = sample_negative_uniform(&train, &pos, 2, 7).unwrap();
        for e in &neg {
            assert!(!pos.pairs().contains(&e));
            assert!(!p.adjacent(e.0, e.1));
        }
    }

    #[test]
    fn histograms() {
        let t = g(&[(0, 1), (1, 2), (0, 2)], None);
        let h = endpoint_degree_histogram(&t.edge_list(), &t).unwrap();
        assert_eq!(h.mass, vec![0.0, 0.0, 1.0]);
        let s = g(&[(0, 1), (0, 2), (0, 3)], None);
        let h = endpoint_degree_histogram(&s.edge_list(), &s).unwrap();
        assert_eq!(h.mass, vec![0.0, 0.5, 0.0, 0.5]);
        // star: p(1) = 3/4, p(3) = 1/4, <k> = 1.5, size-biased = [_, 0.5, _, 0.5]
        let sb = DegreeHistogram::of_graph(&s).size_biased();
        assert!((sb.mass[1] - 0.5).abs() < 1e-15 && (sb.mass[3] - 0.5).abs() < 1e-15);
        assert_eq!(h.ks_distance(&sb), 0.0);
        assert!((sb.ccdf(2) - 0.5).abs() < 1e-15);
        assert!(endpoint_degree_histogram(&EdgeList::from(vec![(0, 9)]), &s).is_err());
    }

    #[test]
    fn generate_is_deterministic() {
        let gr = crate::generators::generate_price(300, 3, 1).unwrap();
        for kind in SamplerKind::ALL {
            let a = EdgeSplit::generate(&gr, 0.25, kind, 42).unwrap();
            let b = EdgeSplit::generate(&gr, 0.25, kind, 42).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.positives.len(), a.negatives.len());
            let (pairs, labels) = a.labelled_pairs();
            assert_eq!(pairs.len(), labels.len());
        }
    }
}
