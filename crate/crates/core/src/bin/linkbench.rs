use std::fs::File;
use std::io::{BufWriter, Read as _, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use linkbench::harness::{compare_ranking_maps, read_rankings_csv, BenchmarkConfig, TaskRanking};
use linkbench::io::{self, read_edge_list, read_graph, write_edge_list, write_graph, write_labels};
use linkbench::metrics::vcmpr_per_node;
use linkbench::theory::{predicted_auc_pa, std_normal_cdf};
use linkbench::{
    build_graph, compact_ids, evaluate, fit_lognormal_degree, generate_lfr, generate_lognormal, generate_price,
    positive_degree_law, score_heuristic, top_c_recommend, vcmpr_at_c, EdgeSplit, Error, Graph, LfrParams, Method,
    MethodSpec, Ranking, Result, SamplerKind,
};

#[derive(Parser)]
#[command(name = "linkbench", version, about = "Link-prediction benchmarks with degree-corrected negatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic graph.
    #[command(subcommand)]
    Generate(Generate),
    /// Hold out positives and sample negatives from a graph.
    Split(SplitArgs),
    /// Score node pairs on a train graph.
    Score(ScoreArgs),
    /// Top-C recommendation and per-node VCMPR.
    Recommend(RecommendArgs),
    /// Rank-biased overlap between two ranking files.
    RankCompare(RankCompareArgs),
    /// Log-normal degree fit and predicted PA AUC-ROC.
    Theory(TheoryArgs),
    /// Run a benchmark sweep from a JSON config.
    Evaluate(EvaluateArgs),
}

#[derive(Subcommand)]
enum Generate {
    /// Price (linear preferential attachment) graph.
    Price {
        #[arg(long)]
        n: usize,
        /// Edges added per new node.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// LFR graph with planted communities.
    Lfr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau1: f64,
        #[arg(long)]
        tau2: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        avg_degree: f64,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        min_comm: usize,
        #[arg(long)]
        max_comm: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write `node community` lines here.
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
    /// Configuration-model graph with log-normal degrees.
    Lognormal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    #[arg(long, value_parser = parse_sampler)]
    negative: SamplerKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_prefix: PathBuf,
    /// Keep only the largest connected component before splitting.
    #[arg(long)]
    lcc: bool,
}

#[derive(Args, Clone, Copy)]
struct MethodArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Weight of length-3 walks for `lpi`.
    #[arg(long, default_value_t = linkbench::predictors::DEFAULT_LPI_EPSILON)]
    epsilon: f64,
    /// Walk length for `lrw`.
    #[arg(long, default_value_t = linkbench::predictors::DEFAULT_LRW_STEPS)]
    walk_steps: usize,
}

impl MethodArgs {
    fn spec(self) -> MethodSpec {
        MethodSpec {
            method: self.method,
            epsilon: self.epsilon,
            walk_steps: self.walk_steps,
        }
    }
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RecommendArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    pos: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, default_value_t = 50)]
    top_c: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RankCompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Task to take from `--a` when it holds several.
    #[arg(long)]
    task_a: Option<String>,
    #[arg(long)]
    task_b: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    rbo_p: f64,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    summary: PathBuf,
    /// Also write the method rankings as `graph,task,rank,method`.
    #[arg(long)]
    rankings: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_sampler(s: &str) -> std::result::Result<SamplerKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(io::create(path)?))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generate(cmd: Generate) -> Result<()> {
    match cmd {
        Generate::Price { n, m, seed, out } => write_graph(&generate_price(n, m, seed)?, out),
        Generate::Lfr {
            n,
            tau1,
            tau2,
            mu,
            avg_degree,
            max_degree,
            min_comm,
            max_comm,
            seed,
            out,
            labels_out,
        } => {
            let params = LfrParams {
                n,
                tau1,
                tau2,
                mu,
                avg_degree,
                max_degree,
                min_comm,
                max_comm,
            };
            let (g, labels) = generate_lfr(&params, seed)?;
            write_graph(&g, out)?;
            if let Some(path) = labels_out {
                write_labels(&labels.labels, path)?;
            }
            Ok(())
        }
        Generate::Lognormal { n, mu, sigma, seed, out } => write_graph(&generate_lognormal(n, mu, sigma, seed)?, out),
    }
}

#[derive(Serialize)]
struct SplitProvenance<'a> {
    tool: &'static str,
    version: &'static str,
    input: &'a Path,
    input_sha256: String,
    /// Input ids were renumbered; `<prefix>.ids` maps new ids to old ones.
    renumbered: bool,
    largest_component: bool,
    num_nodes: usize,
    num_edges: usize,
    beta: f64,
    negative: SamplerKind,
    seed: u64,
    positives: usize,
    negatives: usize,
    self_loops_dropped: usize,
    duplicates_dropped: usize,
}

fn split(args: SplitArgs) -> Result<()> {
    let mut bytes = Vec::new();
    io::open(&args.graph)?.read_to_end(&mut bytes)?;
    let input_sha256 = format!("{:x}", Sha256::digest(&bytes));
    let file = read_edge_list(&args.graph)?;
    // files we wrote carry a node count and are used verbatim
    let renumbered = file.num_nodes.is_none();
    let (pairs, mut ids) = if renumbered {
        compact_ids(&file.pairs)
    } else {
        let n = file.num_nodes.unwrap_or(0);
        (file.pairs.clone(), (0..n as u32).collect())
    };
    let (mut g, report) = build_graph(&pairs, file.num_nodes)?;
    if args.lcc {
        let (lcc, map) = g.largest_connected_component();
        let mut kept = vec![0; lcc.num_nodes()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                kept[*new as usize] = ids[old];
            }
        }
        ids = kept;
        g = lcc;
    }
    let split = EdgeSplit::generate(&g, args.beta, args.negative, args.seed)?;
    write_graph(&split.train, with_ext(&args.out_prefix, "train"))?;
    write_edge_list(&split.positives, None, with_ext(&args.out_prefix, "pos"))?;
    write_edge_list(&split.negatives, None, with_ext(&args.out_prefix, "neg"))?;
    if renumbered || args.lcc {
        let mut out = create(&with_ext(&args.out_prefix, "ids"))?;
        writeln!(out, "# new old")?;
        for (new, old) in ids.iter().enumerate() {
            writeln!(out, "{new} {old}")?;
        }
        out.flush()?;
    }
    let provenance = SplitProvenance {
        tool: "linkbench",
        version: env!("CARGO_PKG_VERSION"),
        input: &args.graph,
        input_sha256,
        renumbered,
        largest_component: args.lcc,
        num_nodes: g.num_nodes(),
        num_edges: g.num_edges(),
        beta: args.beta,
        negative: args.negative,
        seed: args.seed,
        positives: split.positives.len(),
        negatives: split.negatives.len(),
        self_loops_dropped: report.self_loops_dropped,
        duplicates_dropped: report.duplicates_dropped,
    };
    let mut out = create(&with_ext(&args.out_prefix, "json"))?;
    serde_json::to_writer_pretty(&mut out, &provenance)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn read_train(path: &Path) -> Result<Graph> {
    Ok(read_graph(path)?.0)
}

fn score(args: ScoreArgs) -> Result<()> {
    let train = read_train(&args.train)?;
    let pairs = read_edge_list(&args.pairs)?.pairs;
    let table = score_heuristic(&train, &pairs, args.method.spec())?;
    let mut w = csv::Writer::from_writer(create(&args.out)?);
    w.write_record(["i", "j", "score"])?;
    for (&(i, j), s) in table.pairs.pairs().iter().zip(&table.scores) {
        w.write_record([i.to_string(), j.to_string(), s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RecommendSummary {
    method: String,
    top_c: usize,
    nodes: usize,
    vcmpr: f64,
}

fn recommend(args: RecommendArgs) -> Result<()> {
    let train = read_train(&args.train)?;
    let pos = read_edge_list(&args.pos)?.pairs;
    let spec = args.method.spec();
    let recs = top_c_recommend(&train, spec, args.top_c)?;
    let per_node = vcmpr_per_node(&recs, &pos, args.top_c)?;
    let mut w = csv::Writer::from_writer(create(&args.out)?);
    for row in &per_node {
        w.serialize(row)?;
    }
    w.flush()?;
    print_json(&RecommendSummary {
        method: spec.id(),
        top_c: args.top_c,
        nodes: per_node.len(),
        vcmpr: vcmpr_at_c(&recs, &pos, args.top_c)?,
    })
}

fn select_task(rankings: Vec<TaskRanking>, task: Option<&str>, path: &Path) -> Result<std::collections::BTreeMap<String, Ranking>> {
    let mut tasks: Vec<&str> = rankings.iter().map(|r| r.task.as_str()).collect();
    tasks.sort_unstable();
    tasks.dedup();
    let chosen = match task {
        Some(t) => t.to_string(),
        None if tasks.len() == 1 => tasks[0].to_string(),
        None => {
            return Err(Error::Input(format!(
                "{} holds several tasks ({}); pick one with --task-a/--task-b",
                path.display(),
                tasks.join(", ")
            )))
        }
    };
    let map: std::collections::BTreeMap<_, _> = rankings
        .into_iter()
        .filter(|r| r.task == chosen)
        .map(|r| (r.graph, r.ranking))
        .collect();
    if map.is_empty() {
        return Err(Error::Input(format!("no rankings for task {chosen:?} in {}", path.display())));
    }
    Ok(map)
}

fn rank_compare(args: RankCompareArgs) -> Result<()> {
    let a = select_task(read_rankings_csv(io::open(&args.a)?)?, args.task_a.as_deref(), &args.a)?;
    let b = select_task(read_rankings_csv(io::open(&args.b)?)?, args.task_b.as_deref(), &args.b)?;
    print_json(&compare_ranking_maps(&a, &b, args.rbo_p)?)
}

#[derive(Serialize)]
struct TheoryOutput {
    mu: f64,
    sigma: f64,
    predicted_auc_pa: f64,
    positive_law: Law,
}

#[derive(Serialize)]
struct Law {
    mu: f64,
    sigma: f64,
}

fn theory(args: TheoryArgs) -> Result<()> {
    let g = read_train(&args.graph)?;
    let fit = fit_lognormal_degree(&g)?;
    let pos = positive_degree_law(&fit);
    let auc = predicted_auc_pa(fit.sigma)?;
    debug_assert!((auc - std_normal_cdf(fit.sigma)).abs() < 1e-6);
    print_json(&TheoryOutput {
        mu: fit.mu,
        sigma: fit.sigma,
        predicted_auc_pa: auc,
        positive_law: Law {
            mu: pos.mu,
            sigma: pos.sigma,
        },
    })
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let mut config = BenchmarkConfig::from_json(io::open(&args.config)?)?;
    // relative graph paths are resolved against the config's directory
    let base = args.config.parent().unwrap_or(Path::new("")).to_path_buf();
    for g in &mut config.graphs {
        if let linkbench::GraphOrigin::Path(p) = &mut g.origin {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
    let eval = evaluate(&config, args.jobs)?;
    let mut out = create(&args.out)?;
    eval.report.write_csv(&mut out)?;
    out.flush()?;
    let mut summary = create(&args.summary)?;
    eval.write_summary_json(&config, &mut summary)?;
    writeln!(summary)?;
    summary.flush()?;
    if let Some(path) = args.rankings {
        let mut out = create(&path)?;
        eval.report.write_rankings_csv(&mut out)?;
        out.flush()?;
    }
    let failed = eval.report.failures().count();
    if failed > 0 {
        eprintln!("warning: {failed} failed rows; see the metric=failed lines in {}", args.out.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(g) => generate(g),
        Command::Split(a) => split(a),
        Command::Score(a) => score(a),
        Command::Recommend(a) => recommend(a),
        Command::RankCompare(a) => rank_compare(a),
        Command::Theory(a) => theory(a),
        Command::Evaluate(a) => run_evaluate(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
