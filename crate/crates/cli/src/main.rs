//! Batch runner: ingest records, build the diffusion tree, compute metrics,
//! bootstrap, generate synthetic corpora and export DOT.
//!
//! Exit status: 0 success, 2 bad arguments, 65 unreadable or invalid input,
//! 70 internal failure.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use difftree::adoption::{early_adoptions, write_profiles_csv};
use difftree::bootstrap::{bootstrap_metrics, BootstrapConfig};
use difftree::corpus::{apply_merges, citation_closure, load_corpus, write_corpus, LoadReport, MergeMap};
use difftree::metrics::{compute_report, write_domains_csv, write_layers_csv, write_years_csv};
use difftree::synth::{generate, Regime, SynthSpec};
use difftree::tree::{build_tree, export_dot, write_edges_csv};
use difftree::{extract_adopters, AdopterProfile, Corpus, DiffusionTree, Report, ReportOptions, SvVariant};
use serde_json::json;

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "difftree", version, about = "Broadcasting vs. virality diffusion trees from citation records")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate records, apply merges, write the clean corpus and profiles.
    Ingest(IngestArgs),
    /// Build the diffusion tree and write its edge list and DOT rendering.
    BuildTree(IngestArgs),
    /// Compute the metrics report and plot-ready tables.
    Metrics(MetricsArgs),
    /// Resample first-generation citations and summarize scalar metrics.
    Bootstrap(BootstrapArgs),
    /// Generate a synthetic corpus with its ground-truth tree.
    Synth(SynthArgs),
    /// Write only the DOT rendering of the tree.
    ExportDot(IngestArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Line-delimited JSON records.
    #[arg(long)]
    input: PathBuf,
    /// paper_id of the innovation.
    #[arg(long)]
    innovation: String,
    /// CSV with header `raw_id,canonical_id`.
    #[arg(long)]
    merge_map: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: PathBuf,
    /// Repeat-adoption ratios only for adopters with more papers than this.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    min_pubs: u64,
    #[arg(long, default_value = "mean", value_parser = parse_variant)]
    sv_variant: SvVariant,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: PathBuf,
    /// Share of first-generation papers kept per trial, in (0, 1].
    #[arg(long, default_value_t = 0.1, value_parser = parse_fraction)]
    fraction: f64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "mean", value_parser = parse_variant)]
    sv_variant: SvVariant,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, value_parser = parse_regime)]
    regime: Regime,
    /// Number of adopters.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value = "2000-01-01", value_parser = parse_date)]
    start_date: NaiveDate,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    spacing_days: u64,
    #[arg(long, default_value_t = 0.5, value_parser = parse_unit)]
    viral_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_variant(s: &str) -> Result<SvVariant, String> {
    s.parse().map_err(|e: difftree::MetricsError| e.to_string())
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse().map_err(|e: difftree::synth::SynthError| e.to_string())
}

fn parse_date(s: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| format!("expected YYYY-MM-DD: {e}"))
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(format!("{f} is outside (0, 1]"))
    }
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&f) {
        Ok(f)
    } else {
        Err(format!("{f} is outside [0, 1]"))
    }
}

#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Data(e) | Failure::Internal(e) => e,
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

trait Classify<T> {
    fn data(self) -> Outcome<T>;
    fn internal(self) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for std::result::Result<T, E> {
    fn data(self) -> Outcome<T> {
        self.map_err(|e| Failure::Data(e.into()))
    }

    fn internal(self) -> Outcome<T> {
        self.map_err(|e| Failure::Internal(e.into()))
    }
}

fn prepare_out(dir: &Path) -> Outcome<()> {
    fs::create_dir_all(dir)
        .and_then(|_| {
            let probe = dir.join(".difftree-write-probe");
            File::create(&probe)?;
            fs::remove_file(probe)
        })
        .with_context(|| format!("output directory {} is not writable", dir.display()))
        .map_err(Failure::Usage)
}

fn write_file(dir: &Path, name: &str, write: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Outcome<()> {
    let path = dir.join(name);
    let file = File::create(&path)
        .with_context(|| format!("cannot create {}", path.display()))
        .internal()?;
    let mut w = BufWriter::new(file);
    write(&mut w)
        .and_then(|_| Ok(w.flush()?))
        .with_context(|| format!("cannot write {}", path.display()))
        .internal()
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Outcome<()> {
    write_file(dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

struct Loaded {
    corpus: Corpus,
    report: LoadReport,
}

fn load(args: &InputArgs) -> Outcome<Loaded> {
    let (corpus, report) = load_corpus(&args.input, &args.innovation)
        .with_context(|| format!("loading {}", args.input.display()))
        .data()?;
    for m in &report.malformed {
        eprintln!("warning: {}:{}: {}", args.input.display(), m.line, m.reason);
    }
    if report.dropped > 0 {
        eprintln!("warning: dropped {} records with missing title, authors or date", report.dropped);
    }
    let corpus = match &args.merge_map {
        Some(path) => {
            let map = MergeMap::from_path(path)
                .with_context(|| format!("loading merge map {}", path.display()))
                .data()?;
            apply_merges(&corpus, &map)
        }
        None => corpus,
    };
    let early = early_adoptions(&corpus);
    if !early.is_empty() {
        eprintln!(
            "warning: {} closure papers predate the innovation (first: {})",
            early.len(),
            early[0].paper_id
        );
    }
    Ok(Loaded { corpus, report })
}

fn adopters_and_tree(corpus: &Corpus) -> (Vec<AdopterProfile>, DiffusionTree) {
    let profiles = extract_adopters(corpus);
    if profiles.is_empty() {
        eprintln!("warning: no paper cites `{}`; the tree is empty", corpus.innovation_id());
    }
    let tree = build_tree(&profiles, corpus.innovation_id());
    (profiles, tree)
}

fn write_profiles(out: &Path, profiles: &[AdopterProfile]) -> Outcome<()> {
    write_file(out, "profiles.csv", |w| Ok(write_profiles_csv(profiles, w)?))
}

fn write_tree(out: &Path, tree: &DiffusionTree) -> Outcome<()> {
    write_file(out, "tree_edges.csv", |w| Ok(write_edges_csv(tree, w)?))?;
    write_dot(out, tree)
}

fn write_dot(out: &Path, tree: &DiffusionTree) -> Outcome<()> {
    write_file(out, "tree.dot", |w| Ok(w.write_all(export_dot(tree).as_bytes())?))
}

fn ingest(args: &IngestArgs) -> Outcome<String> {
    prepare_out(&args.out)?;
    let Loaded { corpus, report } = load(&args.input)?;
    let profiles = extract_adopters(&corpus);
    write_file(&args.out, "corpus.jsonl", |w| Ok(write_corpus(&corpus, w)?))?;
    write_profiles(&args.out, &profiles)?;
    let closure = citation_closure(&corpus);
    let summary = json!({
        "innovation_id": corpus.innovation_id(),
        "lines": report.lines,
        "loaded": report.loaded,
        "dropped": report.dropped,
        "malformed": report.malformed.iter().map(|m| json!({"line": m.line, "reason": m.reason})).collect::<Vec<_>>(),
        "year_only_dates": report.year_only,
        "deduplicated_authors": report.deduplicated_authors,
        "merges": corpus.merge_map().map_or(0, MergeMap::len),
        "dangling_references": corpus.dangling_references().len(),
        "closure_size": closure.len(),
        "adopters": profiles.len(),
    });
    write_json(&args.out, "ingest.json", &summary)?;
    Ok(format!(
        "ingest: {} papers loaded, {} dropped, {} malformed, {} closure papers, {} adopters",
        report.loaded,
        report.dropped,
        report.malformed.len(),
        closure.len(),
        profiles.len()
    ))
}

fn build(args: &IngestArgs) -> Outcome<String> {
    prepare_out(&args.out)?;
    let Loaded { corpus, .. } = load(&args.input)?;
    let (profiles, tree) = adopters_and_tree(&corpus);
    write_profiles(&args.out, &profiles)?;
    write_tree(&args.out, &tree)?;
    Ok(format!(
        "build-tree: {} adopters, depth {}, {} broadcasting",
        tree.len(),
        tree.depth(),
        tree.layer_sizes().first().copied().unwrap_or(0)
    ))
}

fn metrics(args: &MetricsArgs) -> Outcome<String> {
    prepare_out(&args.out)?;
    let Loaded { corpus, .. } = load(&args.input)?;
    let (profiles, tree) = adopters_and_tree(&corpus);
    let options = ReportOptions {
        min_pubs: args.min_pubs as usize,
        sv_variant: args.sv_variant,
    };
    let report: Report = compute_report(&tree, &profiles, &options).internal()?;
    write_profiles(&args.out, &profiles)?;
    write_tree(&args.out, &tree)?;
    write_json(&args.out, "metrics.json", &report)?;
    write_file(&args.out, "layers.csv", |w| Ok(write_layers_csv(&report, w)?))?;
    write_file(&args.out, "years.csv", |w| Ok(write_years_csv(&report, w)?))?;
    write_file(&args.out, "domains.csv", |w| Ok(write_domains_csv(&report, w)?))?;
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| x.to_string());
    Ok(format!(
        "metrics: {} adopters, depth={}, structural_virality={}, cascade_virality={}",
        report.node_count,
        report.depth,
        fmt(report.structural_virality),
        report.cascade_virality
    ))
}

fn bootstrap(args: &BootstrapArgs) -> Outcome<String> {
    prepare_out(&args.out)?;
    let Loaded { corpus, .. } = load(&args.input)?;
    let config = BootstrapConfig {
        fraction: args.fraction,
        trials: args.trials as usize,
        seed: args.seed,
        sv_variant: args.sv_variant,
    };
    let summary = bootstrap_metrics(&corpus, &config).map_err(|e| Failure::Usage(e.into()))?;
    if summary.skipped > 0 {
        eprintln!("warning: {} trials skipped (empty sample)", summary.skipped);
    }
    write_json(&args.out, "bootstrap.json", &summary)?;
    let depth = summary.metrics.get(difftree::bootstrap::DEPTH);
    Ok(format!(
        "bootstrap: {} of {} trials, sample {} of {} first-generation papers, depth mean={} sd={}",
        summary.completed,
        summary.trials,
        summary.sample_size,
        summary.first_generation,
        depth.map_or(f64::NAN, |s| s.mean),
        depth.map_or(f64::NAN, |s| s.std_dev)
    ))
}

fn synth(args: &SynthArgs) -> Outcome<String> {
    prepare_out(&args.out)?;
    let spec = SynthSpec {
        regime: args.regime,
        n_adopters: args.n as usize,
        start_date: args.start_date,
        spacing_days: args.spacing_days,
        viral_fraction: args.viral_fraction,
        seed: args.seed,
    };
    let generated = generate(&spec).map_err(|e| Failure::Usage(e.into()))?;
    write_file(&args.out, "corpus.jsonl", |w| Ok(write_corpus(&generated.corpus, w)?))?;
    write_file(&args.out, "truth.csv", |w| {
        writeln!(w, "child_id,parent_id")?;
        for (child, parent) in &generated.truth.parents {
            writeln!(w, "{child},{}", parent.as_deref().unwrap_or(difftree::ROOT))?;
        }
        Ok(())
    })?;
    write_json(&args.out, "synth.json", &spec)?;
    Ok(format!(
        "synth: {} regime, {} adopters, {} papers, innovation {}, expected depth {}",
        spec.regime,
        spec.n_adopters,
        generated.corpus.len(),
        generated.corpus.innovation_id(),
        generated.truth.depth()
    ))
}

fn export(args: &IngestArgs) -> Outcome<String> {
    prepare_out(&args.out)?;
    let Loaded { corpus, .. } = load(&args.input)?;
    let (_, tree) = adopters_and_tree(&corpus);
    write_dot(&args.out, &tree)?;
    Ok(format!("export-dot: {} nodes plus root", tree.len()))
}

fn run(cli: &Cli) -> Outcome<String> {
    match &cli.command {
        Command::Ingest(a) => ingest(a),
        Command::BuildTree(a) => build(a),
        Command::Metrics(a) => metrics(a),
        Command::Bootstrap(a) => bootstrap(a),
        Command::Synth(a) => synth(a),
        Command::ExportDot(a) => export(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.exit_code())
        }
    }
}
