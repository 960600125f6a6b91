//! Link-prediction benchmarking with controlled negative sampling.
//!
//! The crate builds simple undirected graphs, hides a fraction of their
//! edges as positives, samples an equal number of unconnected pairs as
//! negatives (uniformly, or with endpoints drawn in proportion to degree),
//! scores both with classic similarity heuristics and summarises the result
//! with AUC-ROC. A top-C recommendation task (VCMPR@C) and rank-biased
//! overlap between method rankings show how far the two evaluations agree.
//!
//! ```
//! use linkbench::{generate_price, score_heuristic, auc_roc, EdgeSplit, Method, MethodSpec, SamplerKind};
//!
//! let g = generate_price(500, 3, 7)?;
//! let split = EdgeSplit::generate(&g, 0.25, SamplerKind::Uniform, 7)?;
//! let spec = MethodSpec::new(Method::Pa);
//! let pos = score_heuristic(&split.train, &split.positives, spec)?;
//! let neg = score_heuristic(&split.train, &split.negatives, spec)?;
//! let auc = auc_roc(&pos.scores, &neg.scores)?;
//! assert!(auc > 0.5);
//! # Ok::<(), linkbench::Error>(())
//! ```

pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod predictors;
pub mod rng;
pub mod sampling;
pub mod theory;

pub use error::{Error, Result};
pub use generators::{
    generate_configuration, generate_lfr, generate_lognormal, generate_price, sample_lognormal_degrees,
    sample_powerlaw_degrees, tune_k_min, CommunityLabels, LfrParams, TruncatedPowerLaw,
};
pub use graph::{build_graph, compact_ids, BuildReport, EdgeList, Graph, NodeId};
pub use harness::{
    compare_rankings, derive_seed, evaluate, run_benchmark, run_recommendation, BenchmarkConfig, BenchmarkReport,
    GraphOrigin, GraphSource, RankComparison,
};
pub use metrics::{auc_roc, rbo, top_c_recommend, vcmpr_at_c, vcmpr_per_node, Ranking, RecommendationList};
pub use predictors::{score_heuristic, score_pa, Method, MethodSpec, ScoreTable};
pub use sampling::{
    sample_negative_degree_corrected, sample_negative_uniform, sample_negatives, split_positive, EdgeSplit,
    SamplerKind,
};
pub use theory::{fit_lognormal_degree, positive_degree_law, predicted_auc_pa, LogNormalFit};

// Book chapters and the README run as doctests so their snippets stay correct.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/theory.md")]
    mod theory {}
    #[doc = include_str!("../../../book/src/predictors.md")]
    mod predictors {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
