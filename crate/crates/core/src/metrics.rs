//! Evaluation metrics: AUC-ROC, top-C recommendation with VCMPR@C, and
//! rank-biased overlap.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeList, Graph, NodeId};
use crate::predictors::{MethodSpec, Scorer};

/// Probability that a positive outscores a negative, ties counted half.
///
/// Computed from rank sums (Mann-Whitney U) after one sort, so it runs in
/// `O((n + m) log(n + m))`.
pub fn auc_roc(pos: &[f64], neg: &[f64]) -> Result<f64> {
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::Input("AUC-ROC needs at least one positive and one negative score".into()));
    }
    if let Some(x) = pos.iter().chain(neg).find(|x| !x.is_finite()) {
        return Err(Error::Input(format!("non-finite score {x}")));
    }
    let mut all: Vec<(f64, bool)> = pos
        .iter()
        .map(|&s| (s, true))
        .chain(neg.iter().map(|&s| (s, false)))
        .collect();
    all.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    // sum of (1-based, tie-averaged) ranks of the positives
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < all.len() {
        let mut end = start + 1;
        while end < all.len() && all[end].0 == all[start].0 {
            end += 1;
        }
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        let npos = all[start..end].iter().filter(|e| e.1).count();
        rank_sum += avg_rank * npos as f64;
        start = end;
    }
    let (n, m) = (pos.len() as f64, neg.len() as f64);
    let u = rank_sum - n * (n + 1.0) / 2.0;
    Ok(u / (n * m))
}

/// Method ids ordered best first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Ranking(Vec<String>);

impl Ranking {
    pub fn new<S: Into<String>>(items: impl IntoIterator<Item = S>) -> Result<Ranking> {
        let items: Vec<String> = items.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        if let Some(dup) = items.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::Input(format!("ranking lists {dup:?} twice")));
        }
        Ok(Ranking(items))
    }

    /// Ranks `(id, value)` by descending value, ties by ascending id.
    pub fn by_score<'a>(scores: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Ranking> {
        let mut v: Vec<(&str, f64)> = scores.into_iter().collect();
        v.sort_by(|a, b| (b.1 + 0.0).total_cmp(&(a.1 + 0.0)).then_with(|| a.0.cmp(b.0)));
        Ranking::new(v.into_iter().map(|(id, _)| id))
    }

    pub fn items(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<String>> for Ranking {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Ranking::new(v)
    }
}

impl From<Ranking> for Vec<String> {
    fn from(r: Ranking) -> Self {
        r.0
    }
}

/// Extrapolated rank-biased overlap of two rankings of the same items.
///
/// With `A_d` the fraction of items shared by the two top-`d` prefixes and
/// `D` the list length, returns `(1 - p) Σ_{d=1..D} p^(d-1) A_d + p^D A_D`.
pub fn rbo(a: &Ranking, b: &Ranking, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Parameter(format!("rbo persistence p = {p} outside (0, 1)")));
    }
    let sa: HashSet<&str> = a.items().iter().map(String::as_str).collect();
    let sb: HashSet<&str> = b.items().iter().map(String::as_str).collect();
    if a.is_empty() || sa != sb {
        return Err(Error::Input("rbo needs two non-empty rankings of the same items".into()));
    }
    if a == b {
        // the sum below is 1 in exact arithmetic but can round just under it
        return Ok(1.0);
    }
    let depth = a.len();
    let mut seen_a: HashSet<&str> = HashSet::with_capacity(depth);
    let mut seen_b: HashSet<&str> = HashSet::with_capacity(depth);
    let mut overlap = 0usize;
    let mut sum = 0.0;
    let mut weight = 1.0;
    let mut agreement = 0.0;
    for d in 0..depth {
        let (x, y) = (a.items()[d].as_str(), b.items()[d].as_str());
        if x == y {
            overlap += 1;
        } else {
            overlap += seen_b.contains(x) as usize + seen_a.contains(y) as usize;
        }
        seen_a.insert(x);
        seen_b.insert(y);
        agreement = overlap as f64 / (d + 1) as f64;
        sum += weight * agreement;
        weight *= p;
    }
    // weight is now p^D
    Ok((1.0 - p) * sum + weight * agreement)
}

/// Top-C candidates per source node, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationList {
    pub c: usize,
    pub lists: Vec<Vec<(NodeId, f64)>>,
}

/// For every node, the `c` highest-scoring nodes that are neither itself nor
/// a train-graph neighbour. Ties go to the smaller node id.
pub fn top_c_recommend(train: &Graph, spec: MethodSpec, c: usize) -> Result<RecommendationList> {
    spec.validate()?;
    if c == 0 {
        return Err(Error::Parameter("top-C needs C >= 1".into()));
    }
    let n = train.num_nodes() as NodeId;
    let lists = (0..n)
        .into_par_iter()
        .map_init(
            || Scorer::new(train, spec),
            |scorer, i| {
                let row = scorer.score_row(i);
                top_candidates(train, i, &row, c)
            },
        )
        .collect();
    Ok(RecommendationList { c, lists })
}

fn better(a: &(NodeId, f64), b: &(NodeId, f64)) -> Ordering {
    // + 0.0 folds -0.0 into 0.0 so signed zeros tie
    (b.1 + 0.0).total_cmp(&(a.1 + 0.0)).then(a.0.cmp(&b.0))
}

fn top_candidates(train: &Graph, i: NodeId, row: &[f64], c: usize) -> Vec<(NodeId, f64)> {
    let nbrs = train.neighbors(i);
    let mut cand: Vec<(NodeId, f64)> = row
        .iter()
        .enumerate()
        .map(|(j, &s)| (j as NodeId, s))
        .filter(|&(j, _)| j != i && nbrs.binary_search(&j).is_err())
        .collect();
    if cand.len() > c {
        cand.select_nth_unstable_by(c - 1, better);
        cand.truncate(c);
    }
    cand.sort_unstable_by(better);
    cand
}

/// Per-node recommendation outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeVcmpr {
    pub node: NodeId,
    pub hits: usize,
    pub partners: usize,
    pub precision: f64,
    pub recall: f64,
    pub vcmpr: f64,
}

/// `max(precision@C, recall@C)` for every node with at least one held-out
/// partner, in ascending node order.
pub fn vcmpr_per_node(recs: &RecommendationList, positives: &EdgeList, c: usize) -> Result<Vec<NodeVcmpr>> {
    if c == 0 {
        return Err(Error::Parameter("VCMPR@C needs C >= 1".into()));
    }
    let mut partners: HashMap<NodeId, HashSet<NodeId>> = HashMap::new();
    for (i, j) in positives {
        if i == j {
            continue;
        }
        partners.entry(i).or_default().insert(j);
        partners.entry(j).or_default().insert(i);
    }
    if partners.is_empty() {
        return Err(Error::Input("no node has a held-out positive edge".into()));
    }
    let mut nodes: Vec<NodeId> = partners.keys().copied().collect();
    nodes.sort_unstable();
    nodes
        .into_iter()
        .map(|i| {
            let list = recs.lists.get(i as usize).ok_or_else(|| {
                Error::Input(format!("node {i} has positives but no recommendation list"))
            })?;
            let mine = &partners[&i];
            let hits = list.iter().take(c).filter(|(j, _)| mine.contains(j)).count();
            let precision = hits as f64 / c as f64;
            let recall = hits as f64 / mine.len() as f64;
            Ok(NodeVcmpr {
                node: i,
                hits,
                partners: mine.len(),
                precision,
                recall,
                vcmpr: precision.max(recall),
            })
        })
        .collect()
}

/// Mean VCMPR@C over nodes with held-out positives.
pub fn vcmpr_at_c(recs: &RecommendationList, positives: &EdgeList, c: usize) -> Result<f64> {
    let per = vcmpr_per_node(recs, positives, c)?;
    Ok(per.iter().map(|r| r.vcmpr).sum::<f64>() / per.len() as f64)
}
