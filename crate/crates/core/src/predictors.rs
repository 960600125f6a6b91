//! Topology-based link predictors.
//!
//! Every predictor reads only the train graph. With `Γ(v)` the neighbours of
//! `v` and `k_v` its degree:
//!
//! | method           | score of `(i, j)`                                        |
//! |------------------|----------------------------------------------------------|
//! | `pa`             | `k_i k_j`                                                |
//! | `cn`             | `|Γ(i) ∩ Γ(j)|`                                          |
//! | `jaccard`        | `|Γ(i) ∩ Γ(j)| / |Γ(i) ∪ Γ(j)|`, 0 for an empty union   |
//! | `adamic_adar`    | `Σ 1 / ln k_z` over common neighbours with `k_z > 1`     |
//! | `resource_alloc` | `Σ 1 / k_z` over common neighbours                       |
//! | `lpi`            | `(A²)_ij + ε (A³)_ij` (walk counts)                      |
//! | `shortest_path`  | `1 / d(i, j)`, 0 when unreachable                        |
//! | `lrw`            | `q_i π_ij(t) + q_j π_ji(t)`, `q_v = k_v / 2M`            |
//!
//! `π_ij(t)` is the probability that a `t`-step simple random walk from `i`
//! ends at `j`. Because `k_i π_ij(t) = k_j π_ji(t)` on an undirected graph,
//! the local random walk score is evaluated as `k_i π_ij(t) / M`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeList, Graph, NodeId};

pub const DEFAULT_LPI_EPSILON: f64 = 0.01;
pub const DEFAULT_LRW_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pa,
    Cn,
    Jaccard,
    AdamicAdar,
    ResourceAlloc,
    Lpi,
    ShortestPath,
    Lrw,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Pa,
        Method::Cn,
        Method::Jaccard,
        Method::AdamicAdar,
        Method::ResourceAlloc,
        Method::Lpi,
        Method::ShortestPath,
        Method::Lrw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pa => "pa",
            Method::Cn => "cn",
            Method::Jaccard => "jaccard",
            Method::AdamicAdar => "adamic_adar",
            Method::ResourceAlloc => "resource_alloc",
            Method::Lpi => "lpi",
            Method::ShortestPath => "shortest_path",
            Method::Lrw => "lrw",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown method {s:?}")))
    }
}

/// A predictor together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MethodSpecRepr", into = "MethodSpecRepr")]
pub struct MethodSpec {
    pub method: Method,
    /// Weight of length-3 walks in `lpi`.
    pub epsilon: f64,
    /// Walk length `t` in `lrw`.
    pub walk_steps: usize,
}

impl MethodSpec {
    pub fn new(method: Method) -> Self {
        MethodSpec {
            method,
            epsilon: DEFAULT_LPI_EPSILON,
            walk_steps: DEFAULT_LRW_STEPS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::Parameter(format!("lpi epsilon must be positive (got {})", self.epsilon)));
        }
        if self.walk_steps < 2 {
            return Err(Error::Parameter(format!(
                "lrw needs at least 2 steps (got {})",
                self.walk_steps
            )));
        }
        Ok(())
    }

    /// Method name, with parameters appended when they differ from the
    /// defaults.
    pub fn id(&self) -> String {
        match self.method {
            Method::Lpi if self.epsilon != DEFAULT_LPI_EPSILON => format!("lpi(epsilon={})", self.epsilon),
            Method::Lrw if self.walk_steps != DEFAULT_LRW_STEPS => format!("lrw(t={})", self.walk_steps),
            m => m.as_str().to_string(),
        }
    }

    pub fn all_default() -> Vec<MethodSpec> {
        Method::ALL.into_iter().map(MethodSpec::new).collect()
    }
}

impl From<Method> for MethodSpec {
    fn from(m: Method) -> Self {
        MethodSpec::new(m)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MethodSpecRepr {
    Name(String),
    Full {
        method: String,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default = "default_steps")]
        walk_steps: usize,
    },
}

fn default_epsilon() -> f64 {
    DEFAULT_LPI_EPSILON
}

fn default_steps() -> usize {
    DEFAULT_LRW_STEPS
}

impl TryFrom<MethodSpecRepr> for MethodSpec {
    type Error = Error;

    fn try_from(r: MethodSpecRepr) -> Result<Self> {
        let spec = match r {
            MethodSpecRepr::Name(m) => MethodSpec::new(m.parse()?),
            MethodSpecRepr::Full {
                method,
                epsilon,
                walk_steps,
            } => MethodSpec {
                method: method.parse()?,
                epsilon,
                walk_steps,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<MethodSpec> for MethodSpecRepr {
    fn from(s: MethodSpec) -> Self {
        if s == MethodSpec::new(s.method) {
            MethodSpecRepr::Name(s.method.to_string())
        } else {
            MethodSpecRepr::Full {
                method: s.method.to_string(),
                epsilon: s.epsilon,
                walk_steps: s.walk_steps,
            }
        }
    }
}

/// Scores of one predictor for a list of pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub pairs: EdgeList,
    pub scores: Vec<f64>,
    pub method: MethodSpec,
}

/// Preferential attachment, `k_i k_j` with train-graph degrees.
pub fn score_pa(train: &Graph, pairs: &EdgeList) -> Result<ScoreTable> {
    score_heuristic(train, pairs, MethodSpec::new(Method::Pa))
}

/// Scores `pairs` on `train` with the given predictor.
pub fn score_heuristic(train: &Graph, pairs: &EdgeList, spec: MethodSpec) -> Result<ScoreTable> {
    spec.validate()?;
    train.check_pairs(pairs)?;
    if let Some((i, _)) = pairs.iter().find(|&(i, j)| i == j) {
        return Err(Error::Input(format!("self pair ({i}, {i}) cannot be scored")));
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_unstable_by_key(|&k| pairs.pairs()[k]);

    let mut scorer = Scorer::new(train, spec);
    let mut scores = vec![0.0; pairs.len()];
    let mut start = 0;
    while start < order.len() {
        let source = pairs.pairs()[order[start]].0;
        let end = start + order[start..].partition_point(|&k| pairs.pairs()[k].0 == source);
        let group = &order[start..end];
        if spec.method == Method::ShortestPath && group.len() < BFS_GROUP_THRESHOLD {
            for &k in group {
                let (i, j) = pairs.pairs()[k];
                scores[k] = inverse_distance(bidirectional_distance(train, i, j));
            }
        } else {
            scorer.prepare(source);
            for &k in group {
                scores[k] = scorer.score(pairs.pairs()[k].1);
            }
        }
        start = end;
    }
    Ok(ScoreTable {
        pairs: pairs.clone(),
        scores,
        method: spec,
    })
}

// Below this many targets per source a pairwise bidirectional search beats a
// full breadth-first sweep.
const BFS_GROUP_THRESHOLD: usize = 8;

fn inverse_distance(d: Option<u32>) -> f64 {
    match d {
        Some(d) if d > 0 => 1.0 / d as f64,
        _ => 0.0,
    }
}

/// Per-source scoring state.
///
/// [`Scorer::prepare`] does the work that depends only on the source node;
/// [`Scorer::score`] then evaluates any target. Pair scoring and top-C
/// recommendation share this path, so both produce identical numbers for the
/// same `(source, target)`.
pub struct Scorer<'g> {
    g: &'g Graph,
    spec: MethodSpec,
    source: NodeId,
    m: f64,
    // neighbour marks (cn family) or length-2 walk counts (lpi)
    counts: Vec<u64>,
    // (t-1)-step walk distribution (lrw)
    walk: Vec<f64>,
    // hop distance (shortest_path)
    dist: Vec<u32>,
    touched: Vec<NodeId>,
}

impl<'g> Scorer<'g> {
    pub fn new(g: &'g Graph, spec: MethodSpec) -> Self {
        let n = g.num_nodes();
        let uses = |ms: &[Method]| ms.contains(&spec.method);
        let counts_len = if uses(&[Method::Cn, Method::Jaccard, Method::AdamicAdar, Method::ResourceAlloc, Method::Lpi]) {
            n
        } else {
            0
        };
        Scorer {
            g,
            spec,
            source: 0,
            m: g.num_edges() as f64,
            counts: vec![0; counts_len],
            walk: vec![0.0; if spec.method == Method::Lrw { n } else { 0 }],
            dist: vec![u32::MAX; if spec.method == Method::ShortestPath { n } else { 0 }],
            touched: Vec::new(),
        }
    }

    pub fn method(&self) -> MethodSpec {
        self.spec
    }

    pub fn prepare(&mut self, source: NodeId) {
        let g = self.g;
        for &v in &self.touched {
            let v = v as usize;
            if let Some(c) = self.counts.get_mut(v) {
                *c = 0;
            }
            if let Some(w) = self.walk.get_mut(v) {
                *w = 0.0;
            }
            if let Some(d) = self.dist.get_mut(v) {
                *d = u32::MAX;
            }
        }
        self.touched.clear();
        self.source = source;

        match self.spec.method {
            Method::Pa => {}
            Method::Cn | Method::Jaccard | Method::AdamicAdar | Method::ResourceAlloc => {
                for &z in g.neighbors(source) {
                    self.counts[z as usize] = 1;
                    self.touched.push(z);
                }
            }
            Method::Lpi => {
                for &z in g.neighbors(source) {
                    for &w in g.neighbors(z) {
                        if self.counts[w as usize] == 0 {
                            self.touched.push(w);
                        }
                        self.counts[w as usize] += 1;
                    }
                }
            }
            Method::ShortestPath => {
                let mut queue = VecDeque::new();
                self.dist[source as usize] = 0;
                self.touched.push(source);
                queue.push_back(source);
                while let Some(v) = queue.pop_front() {
                    let d = self.dist[v as usize] + 1;
                    for &w in g.neighbors(v) {
                        if self.dist[w as usize] == u32::MAX {
                            self.dist[w as usize] = d;
                            self.touched.push(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
            Method::Lrw => self.prepare_walk(source),
        }
    }

    /// Walk distribution after `t - 1` steps from `source`.
    fn prepare_walk(&mut self, source: NodeId) {
        let g = self.g;
        if g.deg(source) == 0 {
            return;
        }
        self.walk[source as usize] = 1.0;
        self.touched.push(source);
        let mut frontier = vec![source];
        let mut next_vals: Vec<(NodeId, f64)> = Vec::new();
        for _ in 0..self.spec.walk_steps - 1 {
            next_vals.clear();
            frontier.sort_unstable();
            for &z in &frontier {
                let share = self.walk[z as usize] / g.deg(z) as f64;
                for &w in g.neighbors(z) {
                    next_vals.push((w, share));
                }
            }
            for &z in &frontier {
                self.walk[z as usize] = 0.0;
            }
            frontier.clear();
            for &(w, share) in &next_vals {
                if self.walk[w as usize] == 0.0 {
                    frontier.push(w);
                    self.touched.push(w);
                }
                self.walk[w as usize] += share;
            }
        }
    }

    /// Score of `(source, target)`; call [`Scorer::prepare`] first.
    pub fn score(&self, target: NodeId) -> f64 {
        let g = self.g;
        let i = self.source;
        let j = target;
        match self.spec.method {
            Method::Pa => g.deg(i) as f64 * g.deg(j) as f64,
            Method::Cn => self.common(j) as f64,
            Method::Jaccard => {
                let c = self.common(j);
                let union = g.deg(i) + g.deg(j) - c;
                if union == 0 {
                    0.0
                } else {
                    c as f64 / union as f64
                }
            }
            // fold from +0.0: an empty f64 `sum()` is -0.0, which orders below 0.0
            Method::AdamicAdar => g
                .neighbors(j)
                .iter()
                .filter(|&&z| self.counts[z as usize] != 0 && g.deg(z) > 1)
                .map(|&z| 1.0 / (g.deg(z) as f64).ln())
                .fold(0.0, |a, b| a + b),
            Method::ResourceAlloc => g
                .neighbors(j)
                .iter()
                .filter(|&&z| self.counts[z as usize] != 0)
                .map(|&z| 1.0 / g.deg(z) as f64)
                .fold(0.0, |a, b| a + b),
            Method::Lpi => {
                let two = self.counts[j as usize];
                let three: u64 = g.neighbors(j).iter().map(|&w| self.counts[w as usize]).sum();
                two as f64 + self.spec.epsilon * three as f64
            }
            Method::ShortestPath => {
                let d = self.dist[j as usize];
                inverse_distance((d != u32::MAX).then_some(d))
            }
            Method::Lrw => {
                if self.m == 0.0 {
                    return 0.0;
                }
                let reach: f64 = g
                    .neighbors(j)
                    .iter()
                    .map(|&z| self.walk[z as usize] / g.deg(z) as f64)
                    .fold(0.0, |a, b| a + b);
                g.deg(i) as f64 * reach / self.m
            }
        }
    }

    fn common(&self, j: NodeId) -> usize {
        self.g
            .neighbors(j)
            .iter()
            .filter(|&&z| self.counts[z as usize] != 0)
            .count()
    }

    /// Scores of `source` against every node.
    pub fn score_row(&mut self, source: NodeId) -> Vec<f64> {
        self.prepare(source);
        (0..self.g.num_nodes() as NodeId).map(|j| self.score(j)).collect()
    }
}

/// Hop distance by bidirectional breadth-first search, expanding the smaller
/// frontier first.
pub fn bidirectional_distance(g: &Graph, s: NodeId, t: NodeId) -> Option<u32> {
    use std::collections::hash_map::{Entry, HashMap};
    if s == t {
        return Some(0);
    }
    let mut seen_s: HashMap<NodeId, u32> = HashMap::from([(s, 0)]);
    let mut seen_t: HashMap<NodeId, u32> = HashMap::from([(t, 0)]);
    let mut front_s = vec![s];
    let mut front_t = vec![t];
    let (mut ds, mut dt) = (0u32, 0u32);
    while !front_s.is_empty() && !front_t.is_empty() {
        let expand_s = front_s.len() <= front_t.len();
        let (front, seen, other, depth) = if expand_s {
            (&mut front_s, &mut seen_s, &seen_t, &mut ds)
        } else {
            (&mut front_t, &mut seen_t, &seen_s, &mut dt)
        };
        *depth += 1;
        let mut best: Option<u32> = None;
        let mut next = Vec::new();
        for &v in front.iter() {
            for &w in g.neighbors(v) {
                if let Some(&d) = other.get(&w) {
                    let total = *depth + d;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if let Entry::Vacant(e) = seen.entry(w) {
                    e.insert(*depth);
                    next.push(w);
                }
            }
        }
        if best.is_some() {
            return best;
        }
        *front = next;
    }
    None
}
