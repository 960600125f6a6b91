//! Benchmark sweeps over graphs, methods, samplers and repeats.
//!
//! Every cell derives its own seed from the master seed and its identifiers
//! (see [`derive_seed`]), so results do not depend on how many workers run
//! the sweep or in which order cells finish. Within one repeat the positive
//! split is shared by all samplers and by the recommendation task; only the
//! negatives differ between samplers.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::{generate_lfr, generate_lognormal, generate_price, LfrParams};
use crate::graph::{build_graph, compact_ids, EdgeList, Graph};
use crate::io::read_edge_list;
use crate::metrics::{auc_roc, rbo, top_c_recommend, vcmpr_at_c, Ranking};
use crate::predictors::{score_heuristic, MethodSpec};
use crate::sampling::{sample_negatives, split_positive, SamplerKind};

/// Task label used for recommendation rows and rankings.
pub const RECOMMENDATION: &str = "recommendation";

/// Where a benchmark graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphOrigin {
    /// Edge-list file; ids are compacted to `0..N` on load.
    Path(PathBuf),
    Price { n: usize, m: usize, seed: u64 },
    Lfr {
        #[serde(flatten)]
        params: LfrParams,
        seed: u64,
    },
    Lognormal { n: usize, mu: f64, sigma: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSource {
    pub id: String,
    #[serde(flatten)]
    pub origin: GraphOrigin,
}

impl GraphSource {
    pub fn load(&self, largest_component: bool) -> Result<Graph> {
        let g = match &self.origin {
            GraphOrigin::Path(path) => {
                let file = read_edge_list(path)?;
                let (pairs, _) = compact_ids(&file.pairs);
                build_graph(&pairs, None)?.0
            }
            GraphOrigin::Price { n, m, seed } => generate_price(*n, *m, *seed)?,
            GraphOrigin::Lfr { params, seed } => generate_lfr(params, *seed)?.0,
            GraphOrigin::Lognormal { n, mu, sigma, seed } => generate_lognormal(*n, *mu, *sigma, *seed)?,
        };
        Ok(if largest_component {
            g.largest_connected_component().0
        } else {
            g
        })
    }
}

fn default_beta() -> f64 {
    0.25
}
fn default_repeats() -> usize {
    5
}
fn default_samplers() -> Vec<SamplerKind> {
    SamplerKind::ALL.to_vec()
}
fn default_top_c() -> usize {
    50
}
fn default_rbo_p() -> f64 {
    0.5
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub graphs: Vec<GraphSource>,
    pub methods: Vec<MethodSpec>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_samplers")]
    pub samplers: Vec<SamplerKind>,
    #[serde(default = "default_top_c")]
    pub top_c: usize,
    #[serde(default = "default_rbo_p")]
    pub rbo_p: f64,
    pub master_seed: u64,
    /// Also run the top-C recommendation task in [`evaluate`].
    #[serde(default = "default_true")]
    pub recommendation: bool,
    /// Restrict every graph to its largest connected component.
    #[serde(default)]
    pub largest_component: bool,
}

impl BenchmarkConfig {
    pub fn new(graphs: Vec<GraphSource>, methods: Vec<MethodSpec>, master_seed: u64) -> Self {
        BenchmarkConfig {
            graphs,
            methods,
            beta: default_beta(),
            repeats: default_repeats(),
            samplers: default_samplers(),
            top_c: default_top_c(),
            rbo_p: default_rbo_p(),
            master_seed,
            recommendation: true,
            largest_component: false,
        }
    }

    pub fn from_json(reader: impl Read) -> Result<Self> {
        let cfg: BenchmarkConfig = serde_json::from_reader(reader)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if self.repeats < 1 {
            return bad("repeats must be at least 1".into());
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("beta = {} outside (0, 1)", self.beta));
        }
        if self.methods.is_empty() {
            return bad("no methods configured".into());
        }
        if self.graphs.is_empty() {
            return bad("no graphs configured".into());
        }
        if self.top_c < 1 {
            return bad("top_c must be at least 1".into());
        }
        if !(self.rbo_p > 0.0 && self.rbo_p < 1.0) {
            return bad(format!("rbo_p = {} outside (0, 1)", self.rbo_p));
        }
        for m in &self.methods {
            m.validate()?;
        }
        let mut ids = HashSet::new();
        for g in &self.graphs {
            if !ids.insert(&g.id) {
                return bad(format!("graph id {:?} used twice", g.id));
            }
        }
        let mut mids = HashSet::new();
        for m in &self.methods {
            if !mids.insert(m.id()) {
                return bad(format!("method {:?} configured twice", m.id()));
            }
        }
        Ok(())
    }
}

/// Seed of one sweep cell: the first eight bytes (little endian) of
/// `SHA-256("linkbench-seed/v1" 0 master 0 graph 0 stream 0 repeat)`, with
/// numbers in decimal and `0` a zero byte.
pub fn derive_seed(master_seed: u64, graph: &str, stream: &str, repeat: usize) -> u64 {
    let mut h = Sha256::new();
    for part in [
        "linkbench-seed/v1",
        &master_seed.to_string(),
        graph,
        stream,
        &repeat.to_string(),
    ] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("sha256 has 32 bytes"))
}

const SPLIT_STREAM: &str = "split";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Repeat {
    Index(usize),
    Mean,
}

impl fmt::Display for Repeat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repeat::Index(r) => write!(f, "{r}"),
            Repeat::Mean => f.write_str("mean"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowValue {
    Number(f64),
    /// The cell failed; holds the reason.
    Failed(String),
}

/// One line of the long-form report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub graph: String,
    pub method: String,
    /// Sampler name, or [`RECOMMENDATION`].
    pub sampler: String,
    pub repeat: Repeat,
    pub metric: String,
    pub value: RowValue,
}

/// Methods ordered by mean score for one graph and task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRanking {
    pub graph: String,
    pub task: String,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkReport {
    pub rows: Vec<ReportRow>,
    pub rankings: Vec<TaskRanking>,
}

pub const CSV_HEADER: [&str; 6] = ["graph", "method", "sampler", "repeat", "metric", "value"];

impl BenchmarkReport {
    /// Merges two reports, keeping row and ranking order.
    pub fn merge(mut self, other: BenchmarkReport) -> BenchmarkReport {
        self.rows.extend(other.rows);
        self.rankings.extend(other.rankings);
        self
    }

    pub fn mean(&self, graph: &str, method: &str, task: &str) -> Option<f64> {
        self.rows.iter().find_map(|r| match (&r.value, r.repeat) {
            (RowValue::Number(v), Repeat::Mean) if r.graph == graph && r.method == method && r.sampler == task => {
                Some(*v)
            }
            _ => None,
        })
    }

    /// Per-repeat values of one (graph, method, task), in repeat order.
    pub fn repeat_values(&self, graph: &str, method: &str, task: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.graph == graph && r.method == method && r.sampler == task)
            .filter_map(|r| match (&r.value, r.repeat) {
                (RowValue::Number(v), Repeat::Index(_)) => Some(*v),
                _ => None,
            })
            .collect()
    }

    pub fn ranking(&self, graph: &str, task: &str) -> Option<&Ranking> {
        self.rankings
            .iter()
            .find(|r| r.graph == graph && r.task == task)
            .map(|r| &r.ranking)
    }

    pub fn rankings_for(&self, task: &str) -> BTreeMap<String, Ranking> {
        self.rankings
            .iter()
            .filter(|r| r.task == task)
            .map(|r| (r.graph.clone(), r.ranking.clone()))
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| matches!(r.value, RowValue::Failed(_)))
    }

    /// Long-form CSV with header `graph,method,sampler,repeat,metric,value`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let (metric, value) = match &r.value {
                RowValue::Number(v) => (r.metric.clone(), v.to_string()),
                RowValue::Failed(reason) => ("failed".to_string(), reason.clone()),
            };
            w.write_record([
                r.graph.as_str(),
                r.method.as_str(),
                r.sampler.as_str(),
                &r.repeat.to_string(),
                &metric,
                &value,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rankings as CSV with header `graph,task,rank,method` (rank 1 is best).
    pub fn write_rankings_csv(&self, out: impl Write) -> Result<()> {
        write_rankings_csv(&self.rankings, out)
    }
}

pub fn write_rankings_csv(rankings: &[TaskRanking], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["graph", "task", "rank", "method"])?;
    for tr in rankings {
        for (k, m) in tr.ranking.items().iter().enumerate() {
            w.write_record([tr.graph.as_str(), tr.task.as_str(), &(k + 1).to_string(), m.as_str()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_rankings_csv(input: impl Read) -> Result<Vec<TaskRanking>> {
    let mut r = csv::Reader::from_reader(input);
    let mut grouped: BTreeMap<(String, String), Vec<(usize, String)>> = BTreeMap::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |k: usize| rec.get(k).map(str::to_string).ok_or_else(|| Error::Input(format!("short ranking row {rec:?}")));
        let rank: usize = field(2)?
            .parse()
            .map_err(|_| Error::Input(format!("bad rank in {rec:?}")))?;
        grouped.entry((field(0)?, field(1)?)).or_default().push((rank, field(3)?));
    }
    grouped
        .into_iter()
        .map(|((graph, task), mut items)| {
            items.sort();
            Ok(TaskRanking {
                graph,
                task,
                ranking: Ranking::new(items.into_iter().map(|(_, m)| m))?,
            })
        })
        .collect()
}

/// Per-graph RBO between two sets of rankings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankComparison {
    pub per_graph: BTreeMap<String, f64>,
    pub mean: f64,
}

pub fn compare_ranking_maps(
    a: &BTreeMap<String, Ranking>,
    b: &BTreeMap<String, Ranking>,
    p: f64,
) -> Result<RankComparison> {
    if a.is_empty() || a.keys().ne(b.keys()) {
        return Err(Error::Input("rankings must cover the same, non-empty set of graphs".into()));
    }
    let mut per_graph = BTreeMap::new();
    for (graph, ra) in a {
        let rb = &b[graph];
        let value = rbo(ra, rb, p).map_err(|_| {
            Error::Input(format!("method sets differ between the two rankings of {graph:?}"))
        })?;
        per_graph.insert(graph.clone(), value);
    }
    let mean = per_graph.values().sum::<f64>() / per_graph.len() as f64;
    Ok(RankComparison { per_graph, mean })
}

/// RBO, per graph, between the `task_a` rankings of `a` and the `task_b`
/// rankings of `b`.
pub fn compare_rankings(
    a: &BenchmarkReport,
    task_a: &str,
    b: &BenchmarkReport,
    task_b: &str,
    p: f64,
) -> Result<RankComparison> {
    compare_ranking_maps(&a.rankings_for(task_a), &b.rankings_for(task_b), p)
}

struct Loaded {
    id: String,
    graph: Graph,
}

fn load_all(config: &BenchmarkConfig) -> Result<Vec<Loaded>> {
    config
        .graphs
        .par_iter()
        .map(|src| {
            Ok(Loaded {
                id: src.id.clone(),
                graph: src.load(config.largest_component)?,
            })
        })
        .collect()
}

fn check_seed_collisions(config: &BenchmarkConfig, streams: &[&str]) -> Result<()> {
    let mut seen = HashSet::new();
    for g in &config.graphs {
        for s in streams.iter().copied().chain([SPLIT_STREAM]) {
            for r in 0..config.repeats {
                if !seen.insert(derive_seed(config.master_seed, &g.id, s, r)) {
                    return Err(Error::Parameter(format!(
                        "derived seed collision at graph {:?}, stream {s}, repeat {r}; change master_seed",
                        g.id
                    )));
                }
            }
        }
    }
    Ok(())
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

// one repeat of one (graph, task): a value per method, or a failure reason
type CellResult = Vec<std::result::Result<f64, String>>;

fn aggregate(
    config: &BenchmarkConfig,
    graphs: &[Loaded],
    tasks: &[String],
    metric: &str,
    cells: &[CellResult],
) -> BenchmarkReport {
    let mut report = BenchmarkReport::default();
    let mut idx = 0;
    for g in graphs {
        for task in tasks {
            let block = &cells[idx..idx + config.repeats];
            idx += config.repeats;
            let mut means: Vec<(String, f64)> = Vec::new();
            for (mi, spec) in config.methods.iter().enumerate() {
                let method = spec.id();
                let mut values = Vec::new();
                for (r, cell) in block.iter().enumerate() {
                    let value = match &cell[mi] {
                        Ok(v) => {
                            values.push(*v);
                            RowValue::Number(*v)
                        }
                        Err(reason) => RowValue::Failed(reason.clone()),
                    };
                    report.rows.push(ReportRow {
                        graph: g.id.clone(),
                        method: method.clone(),
                        sampler: task.clone(),
                        repeat: Repeat::Index(r),
                        metric: metric.to_string(),
                        value,
                    });
                }
                let mean = if values.is_empty() {
                    f64::NEG_INFINITY
                } else {
                    let m = values.iter().sum::<f64>() / values.len() as f64;
                    report.rows.push(ReportRow {
                        graph: g.id.clone(),
                        method: method.clone(),
                        sampler: task.clone(),
                        repeat: Repeat::Mean,
                        metric: metric.to_string(),
                        value: RowValue::Number(m),
                    });
                    m
                };
                means.push((method, mean));
            }
            let ranking = Ranking::by_score(means.iter().map(|(m, v)| (m.as_str(), *v)))
                .expect("method ids are unique");
            report.rankings.push(TaskRanking {
                graph: g.id.clone(),
                task: task.clone(),
                ranking,
            });
        }
    }
    report
}

fn link_prediction_cell(
    config: &BenchmarkConfig,
    g: &Loaded,
    sampler: SamplerKind,
    repeat: usize,
) -> CellResult {
    let fail_all = |e: Error| vec![Err(e.to_string()); config.methods.len()];
    let split_seed = derive_seed(config.master_seed, &g.id, SPLIT_STREAM, repeat);
    let (train, positives) = match split_positive(&g.graph, config.beta, split_seed) {
        Ok(s) => s,
        Err(e) => return fail_all(e),
    };
    let neg_seed = derive_seed(config.master_seed, &g.id, sampler.as_str(), repeat);
    let negatives = match sample_negatives(sampler, &g.graph, &positives, positives.len(), neg_seed) {
        Ok(n) => n,
        Err(e) => return fail_all(e),
    };
    let npos = positives.len();
    let pairs: EdgeList = positives.iter().chain(negatives.iter()).collect();
    config
        .methods
        .iter()
        .map(|&spec| {
            let table = score_heuristic(&train, &pairs, spec).map_err(|e| e.to_string())?;
            auc_roc(&table.scores[..npos], &table.scores[npos..]).map_err(|e| e.to_string())
        })
        .collect()
}

fn recommendation_cell(config: &BenchmarkConfig, g: &Loaded, repeat: usize) -> CellResult {
    let split_seed = derive_seed(config.master_seed, &g.id, SPLIT_STREAM, repeat);
    let (train, positives) = match split_positive(&g.graph, config.beta, split_seed) {
        Ok(s) => s,
        Err(e) => return vec![Err(e.to_string()); config.methods.len()],
    };
    config
        .methods
        .iter()
        .map(|&spec| {
            let recs = top_c_recommend(&train, spec, config.top_c).map_err(|e| e.to_string())?;
            vcmpr_at_c(&recs, &positives, config.top_c).map_err(|e| e.to_string())
        })
        .collect()
}

/// Link-prediction sweep: AUC-ROC per (graph, sampler, repeat, method),
/// means per (graph, sampler, method), and a method ranking per
/// (graph, sampler).
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkReport> {
    run_benchmark_with_jobs(config, None)
}

pub fn run_benchmark_with_jobs(config: &BenchmarkConfig, jobs: Option<usize>) -> Result<BenchmarkReport> {
    config.validate()?;
    let streams: Vec<&str> = config.samplers.iter().map(|s| s.as_str()).collect();
    check_seed_collisions(config, &streams)?;
    run_in_pool(jobs, || {
        let graphs = load_all(config)?;
        let cells: Vec<(usize, SamplerKind, usize)> = (0..graphs.len())
            .flat_map(|g| {
                config
                    .samplers
                    .iter()
                    .flat_map(move |&s| (0..config.repeats).map(move |r| (g, s, r)))
            })
            .collect();
        let results: Vec<CellResult> = cells
            .par_iter()
            .map(|&(g, s, r)| link_prediction_cell(config, &graphs[g], s, r))
            .collect();
        let tasks: Vec<String> = config.samplers.iter().map(|s| s.to_string()).collect();
        Ok(aggregate(config, &graphs, &tasks, "auc_roc", &results))
    })?
}

/// Recommendation sweep: VCMPR@C per (graph, repeat, method), means, and a
/// method ranking per graph under the task name [`RECOMMENDATION`].
pub fn run_recommendation(config: &BenchmarkConfig) -> Result<BenchmarkReport> {
    run_recommendation_with_jobs(config, None)
}

pub fn run_recommendation_with_jobs(config: &BenchmarkConfig, jobs: Option<usize>) -> Result<BenchmarkReport> {
    config.validate()?;
    check_seed_collisions(config, &[])?;
    run_in_pool(jobs, || {
        let graphs = load_all(config)?;
        let cells: Vec<(usize, usize)> = (0..graphs.len())
            .flat_map(|g| (0..config.repeats).map(move |r| (g, r)))
            .collect();
        let results: Vec<CellResult> = cells
            .par_iter()
            .map(|&(g, r)| recommendation_cell(config, &graphs[g], r))
            .collect();
        let metric = format!("vcmpr@{}", config.top_c);
        Ok(aggregate(config, &graphs, &[RECOMMENDATION.to_string()], &metric, &results))
    })?
}

/// Output of [`evaluate`]: the combined report and, when the recommendation
/// task ran, the RBO of each sampler's ranking against it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: BenchmarkReport,
    pub comparisons: BTreeMap<String, RankComparison>,
}

#[derive(Serialize)]
struct Summary<'a> {
    master_seed: u64,
    beta: f64,
    repeats: usize,
    top_c: usize,
    rbo_p: f64,
    failed_rows: usize,
    rankings: &'a [TaskRanking],
    /// keyed by sampler; RBO against the recommendation ranking
    rbo_vs_recommendation: &'a BTreeMap<String, RankComparison>,
}

impl Evaluation {
    pub fn write_summary_json(&self, config: &BenchmarkConfig, out: impl Write) -> Result<()> {
        let summary = Summary {
            master_seed: config.master_seed,
            beta: config.beta,
            repeats: config.repeats,
            top_c: config.top_c,
            rbo_p: config.rbo_p,
            failed_rows: self.report.failures().count(),
            rankings: &self.report.rankings,
            rbo_vs_recommendation: &self.comparisons,
        };
        serde_json::to_writer_pretty(out, &summary)?;
        Ok(())
    }
}

/// Runs the link-prediction sweep and, if configured, the recommendation
/// task, then compares every sampler's ranking with the recommendation
/// ranking.
pub fn evaluate(config: &BenchmarkConfig, jobs: Option<usize>) -> Result<Evaluation> {
    let lp = run_benchmark_with_jobs(config, jobs)?;
    if !config.recommendation {
        return Ok(Evaluation {
            report: lp,
            comparisons: BTreeMap::new(),
        });
    }
    let rec = run_recommendation_with_jobs(config, jobs)?;
    let mut comparisons = BTreeMap::new();
    for s in &config.samplers {
        let cmp = compare_rankings(&lp, s.as_str(), &rec, RECOMMENDATION, config.rbo_p)?;
        comparisons.insert(s.to_string(), cmp);
    }
    Ok(Evaluation {
        report: lp.merge(rec),
        comparisons,
    })
}
