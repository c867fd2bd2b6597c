//! Reconstruction of innovation diffusion trees from citation and
//! co-authorship records.
//!
//! The pipeline runs [`corpus`] → [`adoption`] → [`tree`] → [`metrics`]:
//! load records, derive adopter profiles from the citation closure of the
//! innovation paper, attach each adopter to the root (broadcasting) or to
//! its earliest-adopting coauthor (virality), then measure scale, depth and
//! speed. [`synth`] produces corpora with known trees for testing and
//! [`bootstrap`] resamples first-generation citations.
//!
//! Metrics are generic over [`Scalar`]; the aliases below cover the common
//! choices.

pub mod adoption;
pub mod bootstrap;
pub mod corpus;
pub mod metrics;
pub mod scalar;
pub mod synth;
pub mod tree;

pub use adoption::{adopters_by_year, extract_adopters, AdopterProfile};
pub use bootstrap::{bootstrap_metrics, BootstrapConfig, BootstrapSummary};
pub use corpus::{apply_merges, citation_closure, load_corpus, Corpus, CorpusError, MergeMap, PaperRecord};
pub use metrics::{compute_report, MetricsError, MetricsReport, ReportOptions, SvVariant};
pub use scalar::Scalar;
pub use synth::{fixture_f1, generate, Regime, SynthSpec};
pub use tree::{build_tree, export_dot, Channel, DiffusionNode, DiffusionTree, ROOT};

/// Arbitrary-precision rational.
pub type Exact = num_rational::BigRational;

pub type Report = MetricsReport<f64>;
pub type ReportF32 = MetricsReport<f32>;
pub type ExactReport = MetricsReport<Exact>;
