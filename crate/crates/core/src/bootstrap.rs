//! Resampling of first-generation papers to gauge how sensitive the tree
//! metrics are to incomplete citation data.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adoption::extract_adopters;
use crate::corpus::Corpus;
use crate::metrics::{cascade_virality, structural_virality, MetricsError, SvVariant};
use crate::scalar::{ratio, Scalar};
use crate::tree::build_tree;

pub const DEPTH: &str = "depth";
pub const STRUCTURAL_VIRALITY: &str = "structural_virality";
pub const CASCADE_VIRALITY: &str = "cascade_virality";
pub const BROADCAST_SHARE: &str = "broadcast_share";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    /// Share of first-generation papers kept per trial, in `(0, 1]`.
    pub fraction: f64,
    pub trials: usize,
    pub seed: u64,
    pub sv_variant: SvVariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    pub mean: f64,
    pub std_dev: f64,
    /// Trials that produced a value for this metric.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub fraction: f64,
    pub trials: usize,
    pub seed: u64,
    pub first_generation: usize,
    pub sample_size: usize,
    pub completed: usize,
    pub skipped: usize,
    /// Values on the full corpus.
    pub full: BTreeMap<String, Option<f64>>,
    pub metrics: BTreeMap<String, MetricStat>,
}

/// Welford accumulator; a constant series keeps its mean bit-exact and its
/// spread at exactly zero.
#[derive(Debug, Default, Clone, Copy)]
struct Running {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Sample standard deviation; zero for fewer than two values.
    fn stat(&self) -> MetricStat {
        let std_dev = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64).sqrt()
        } else {
            0.0
        };
        MetricStat {
            mean: self.mean,
            std_dev,
            samples: self.n,
        }
    }
}

/// Scalar metrics of the tree built from `corpus`; `None` when no adopter
/// remains.
pub fn scalar_metrics(corpus: &Corpus, sv_variant: SvVariant) -> Option<BTreeMap<&'static str, Option<f64>>> {
    let profiles = extract_adopters(corpus);
    let tree = build_tree(&profiles, corpus.innovation_id());
    if tree.is_empty() {
        return None;
    }
    let layer_sizes = tree.layer_sizes();
    Some(BTreeMap::from([
        (DEPTH, Some(layer_sizes.len() as f64)),
        (STRUCTURAL_VIRALITY, structural_virality::<f64>(&tree, sv_variant)),
        (CASCADE_VIRALITY, Some(cascade_virality::<f64>(&tree))),
        (BROADCAST_SHARE, Some(ratio::<f64>(layer_sizes[0], tree.len()).to_f64_lossy())),
    ]))
}

/// Runs `trials` resamples, each keeping `ceil(fraction * |gen-1|)`
/// first-generation papers drawn without replacement and dropping the rest
/// from the corpus. Trial `k` draws from stream `k` of a ChaCha generator
/// seeded with `seed`, so results do not depend on scheduling.
pub fn bootstrap_metrics(corpus: &Corpus, config: &BootstrapConfig) -> Result<BootstrapSummary, MetricsError> {
    if !(config.fraction > 0.0 && config.fraction <= 1.0) {
        return Err(MetricsError::InvalidFraction(config.fraction));
    }
    if config.trials == 0 {
        return Err(MetricsError::NoTrials);
    }
    let first: Vec<String> = corpus.generations().first.into_iter().collect();
    let sample_size = ((config.fraction * first.len() as f64).ceil() as usize).min(first.len());

    let trials: Vec<Option<BTreeMap<&'static str, Option<f64>>>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            if sample_size == 0 {
                return None;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(trial as u64);
            let kept: BTreeSet<usize> = rand::seq::index::sample(&mut rng, first.len(), sample_size)
                .into_iter()
                .collect();
            let removed: BTreeSet<String> = first
                .iter()
                .enumerate()
                .filter(|(i, _)| !kept.contains(i))
                .map(|(_, id)| id.clone())
                .collect();
            scalar_metrics(&corpus.without(&removed), config.sv_variant)
        })
        .collect();

    let mut running: BTreeMap<&'static str, Running> = BTreeMap::new();
    let mut completed = 0;
    for values in trials.iter().flatten() {
        completed += 1;
        for (name, value) in values {
            let entry = running.entry(name).or_default();
            if let Some(v) = value {
                entry.push(*v);
            }
        }
    }
    let full = scalar_metrics(corpus, config.sv_variant)
        .unwrap_or_default()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    Ok(BootstrapSummary {
        fraction: config.fraction,
        trials: config.trials,
        seed: config.seed,
        first_generation: first.len(),
        sample_size,
        completed,
        skipped: config.trials - completed,
        full,
        metrics: running.into_iter().map(|(k, r)| (k.to_string(), r.stat())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;
    use crate::synth::fixture_f1;

    fn config(fraction: f64, trials: usize, seed: u64) -> BootstrapConfig {
        BootstrapConfig {
            fraction,
            trials,
            seed,
            sv_variant: SvVariant::Mean,
        }
    }

    #[test]
    fn full_fraction_has_zero_spread() {
        let summary = bootstrap_metrics(&fixture_f1(), &config(1.0, 7, 3)).unwrap();
        assert_eq!(summary.completed, 7);
        for (name, stat) in &summary.metrics {
            assert_eq!(stat.std_dev, 0.0, "{name}");
            assert_eq!(Some(stat.mean), summary.full[name], "{name}");
        }
        assert_eq!(summary.metrics[DEPTH].mean, 3.0);
    }

    #[test]
    fn same_seed_same_output() {
        let a = bootstrap_metrics(&fixture_f1(), &config(0.5, 50, 11)).unwrap();
        let b = bootstrap_metrics(&fixture_f1(), &config(0.5, 50, 11)).unwrap();
        assert_eq!(a, b);
    }

    /// Every 2-of-3 subset of F1's first generation yields depth 3 or 1.
    #[test]
    fn f1_half_fraction_depth_within_subset_bounds() {
        let corpus = fixture_f1();
        let first: Vec<String> = corpus.generations().first.into_iter().collect();
        let mut depths = Vec::new();
        for drop in &first {
            let removed = BTreeSet::from([drop.clone()]);
            let m = scalar_metrics(&corpus.without(&removed), SvVariant::Mean).unwrap();
            depths.push(m[DEPTH].unwrap());
        }
        let (lo, hi) = depths.iter().fold((f64::MAX, f64::MIN), |(l, h), &d| (l.min(d), h.max(d)));
        assert_eq!((lo, hi), (1.0, 3.0));

        let summary = bootstrap_metrics(&corpus, &config(0.5, 100, 2024)).unwrap();
        assert_eq!(summary.sample_size, 2);
        let mean = summary.metrics[DEPTH].mean;
        assert!((lo..=hi).contains(&mean), "{mean}");
    }

    #[test]
    fn invalid_parameters() {
        let c = fixture_f1();
        assert!(matches!(bootstrap_metrics(&c, &config(0.0, 1, 0)), Err(MetricsError::InvalidFraction(_))));
        assert!(matches!(bootstrap_metrics(&c, &config(1.5, 1, 0)), Err(MetricsError::InvalidFraction(_))));
        assert!(matches!(bootstrap_metrics(&c, &config(0.5, 0, 0)), Err(MetricsError::NoTrials)));
    }

    #[test]
    fn empty_first_generation_skips_every_trial() {
        let p = PaperRecord {
            paper_id: "I".into(),
            title: "t".into(),
            pub_date: chrono::NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(),
            author_ids: vec!["z".into()],
            references: vec![],
            fields_of_study: vec![],
        };
        let corpus = Corpus::new(vec![p], "I").unwrap();
        let summary = bootstrap_metrics(&corpus, &config(0.5, 4, 0)).unwrap();
        assert_eq!((summary.completed, summary.skipped), (0, 4));
        assert!(summary.metrics.is_empty());
    }
}
