//! Synthetic corpora with known diffusion structure.
//!
//! Every generator records the parent it intends for each adopter, so the
//! tree builder can be checked edge by edge.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, CorpusError, PaperRecord};

pub const SYNTH_INNOVATION_ID: &str = "INNOVATION";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("n_adopters must be at least 1")]
    NoAdopters,
    #[error("spacing_days must be at least 1")]
    ZeroSpacing,
    #[error("viral_fraction {0} outside [0, 1]")]
    InvalidViralFraction(f64),
    #[error("generated dates leave the supported range")]
    DateOverflow,
    #[error("unknown regime `{0}` (expected broadcast, chain or mixed)")]
    UnknownRegime(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Broadcast,
    Chain,
    Mixed,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Broadcast => "broadcast",
            Regime::Chain => "chain",
            Regime::Mixed => "mixed",
        })
    }
}

impl FromStr for Regime {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "broadcast" => Ok(Regime::Broadcast),
            "chain" => Ok(Regime::Chain),
            "mixed" => Ok(Regime::Mixed),
            other => Err(SynthError::UnknownRegime(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub regime: Regime,
    pub n_adopters: usize,
    /// Publication date of the innovation; adopters follow it.
    pub start_date: NaiveDate,
    pub spacing_days: u64,
    /// Probability that a mixed-regime adopter learns from a coauthor.
    pub viral_fraction: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(regime: Regime, n_adopters: usize) -> Self {
        Self {
            regime,
            n_adopters,
            start_date: NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(),
            spacing_days: 30,
            viral_fraction: 0.5,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        if self.n_adopters == 0 {
            return Err(SynthError::NoAdopters);
        }
        if self.spacing_days == 0 {
            return Err(SynthError::ZeroSpacing);
        }
        if !(0.0..=1.0).contains(&self.viral_fraction) {
            return Err(SynthError::InvalidViralFraction(self.viral_fraction));
        }
        Ok(())
    }
}

/// Intended parent of every adopter (`None` = innovation root).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub parents: BTreeMap<String, Option<String>>,
}

impl GroundTruth {
    pub fn depth(&self) -> usize {
        let mut layers: BTreeMap<&str, usize> = BTreeMap::new();
        fn layer<'a>(
            id: &'a str,
            parents: &'a BTreeMap<String, Option<String>>,
            memo: &mut BTreeMap<&'a str, usize>,
        ) -> usize {
            if let Some(&l) = memo.get(id) {
                return l;
            }
            let l = match &parents[id] {
                None => 1,
                Some(p) => layer(p, parents, memo) + 1,
            };
            memo.insert(id, l);
            l
        }
        self.parents
            .keys()
            .map(|id| layer(id, &self.parents, &mut layers))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub corpus: Corpus,
    pub truth: GroundTruth,
}

fn author_id(i: usize) -> String {
    format!("a{i:05}")
}

struct Builder {
    papers: Vec<PaperRecord>,
    innovation: String,
}

impl Builder {
    fn new(start: NaiveDate) -> Self {
        let innovation = PaperRecord {
            paper_id: SYNTH_INNOVATION_ID.into(),
            title: "Innovation".into(),
            pub_date: start,
            author_ids: vec!["inventor".into()],
            references: vec![],
            fields_of_study: vec!["computer science".into()],
        };
        Self {
            papers: vec![innovation],
            innovation: SYNTH_INNOVATION_ID.into(),
        }
    }

    fn push(&mut self, date: NaiveDate, authors: Vec<String>, references: Vec<String>, field: &str) -> String {
        let paper_id = format!("P{:06}", self.papers.len());
        self.papers.push(PaperRecord {
            paper_id: paper_id.clone(),
            title: format!("Synthetic paper {paper_id}"),
            pub_date: date,
            author_ids: authors,
            references,
            fields_of_study: vec![field.to_string()],
        });
        paper_id
    }

    fn finish(self) -> Result<Corpus, SynthError> {
        Ok(Corpus::new(self.papers, self.innovation)?)
    }
}

fn offset(start: NaiveDate, days: u64) -> Result<NaiveDate, SynthError> {
    start.checked_add_days(Days::new(days)).ok_or(SynthError::DateOverflow)
}

const FIELDS: [&str; 4] = ["biology", "computer science", "mathematics", "physics"];

pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    spec.validate()?;
    match spec.regime {
        Regime::Broadcast => broadcast(spec),
        Regime::Chain => chain(spec),
        Regime::Mixed => mixed(spec),
    }
}

fn broadcast(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    let mut b = Builder::new(spec.start_date);
    let mut truth = GroundTruth::default();
    for i in 0..spec.n_adopters {
        let date = offset(spec.start_date, spec.spacing_days * (i as u64 + 1))?;
        b.push(date, vec![author_id(i)], vec![SYNTH_INNOVATION_ID.into()], "computer science");
        truth.parents.insert(author_id(i), None);
    }
    Ok(SynthCorpus {
        corpus: b.finish()?,
        truth,
    })
}

/// Paper `k` is authored by adopters `k-1` and `k`, so each adopter's only
/// earlier coauthor is its predecessor.
fn chain(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    let mut b = Builder::new(spec.start_date);
    let mut truth = GroundTruth::default();
    for k in 0..spec.n_adopters {
        let date = offset(spec.start_date, spec.spacing_days * (k as u64 + 1))?;
        let mut authors = vec![author_id(k)];
        if k > 0 {
            authors.insert(0, author_id(k - 1));
        }
        b.push(date, authors, vec![SYNTH_INNOVATION_ID.into()], "computer science");
        truth.parents.insert(author_id(k), k.checked_sub(1).map(author_id));
    }
    Ok(SynthCorpus {
        corpus: b.finish()?,
        truth,
    })
}

/// Seeded blend of broadcasting and viral adoption.
///
/// Adopters are dated in non-decreasing order, several per day at times.
/// A viral adopter's first paper is coauthored with its intended parent
/// (strictly earlier) and possibly with same-day peers of that parent whose
/// ids sort after it; a broadcasting adopter's first paper only shares
/// authors with same-day adopters. First papers cite the innovation or an
/// earlier first-generation paper. Extra papers add career history outside
/// the closure, solo repeat citations, and dangling references.
fn mixed(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = Builder::new(spec.start_date);
    let mut truth = GroundTruth::default();
    let n = spec.n_adopters;

    let mut step = 0u64;
    let mut dates = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && rng.gen_bool(0.7) {
            step += 1;
        }
        dates.push(offset(spec.start_date, spec.spacing_days * (step + 1))?);
    }
    let domains: Vec<&str> = (0..n).map(|_| FIELDS[rng.gen_range(0..FIELDS.len())]).collect();

    // Career papers predating the innovation, outside the closure.
    for (i, domain) in domains.iter().enumerate() {
        if rng.gen_bool(0.3) {
            let back = rng.gen_range(1..=3000);
            let date = spec
                .start_date
                .checked_sub_days(Days::new(back))
                .ok_or(SynthError::DateOverflow)?;
            let mut authors = vec![author_id(i)];
            if n > 1 && rng.gen_bool(0.3) {
                let other = rng.gen_range(0..n);
                if other != i {
                    authors.push(author_id(other));
                }
            }
            b.push(date, authors, vec![format!("EXT{}", rng.gen_range(0..50))], domain);
        }
    }

    let mut gen1: Vec<(NaiveDate, String)> = Vec::new();
    let mut first_of_day = 0usize;
    for i in 0..n {
        if i > 0 && dates[i] != dates[i - 1] {
            first_of_day = i;
        }
        // Adopters 0..first_of_day adopted strictly earlier.
        let parent = (first_of_day > 0 && rng.gen_bool(spec.viral_fraction))
            .then(|| rng.gen_range(0..first_of_day));

        let mut authors = vec![author_id(i)];
        match parent {
            Some(p) => {
                authors.push(author_id(p));
                let peers: Vec<usize> = (p + 1..first_of_day).filter(|&q| dates[q] == dates[p]).collect();
                if !peers.is_empty() && rng.gen_bool(0.3) {
                    let k = rng.gen_range(1..=peers.len().min(2));
                    authors.extend(peers.choose_multiple(&mut rng, k).map(|&q| author_id(q)));
                }
            }
            None => {
                let same_day: Vec<usize> = (first_of_day..i).collect();
                if !same_day.is_empty() && rng.gen_bool(0.2) {
                    authors.push(author_id(*same_day.choose(&mut rng).unwrap()));
                }
            }
        }
        authors.shuffle(&mut rng);

        let eligible = gen1.partition_point(|(d, _)| *d <= dates[i]);
        let mut references = if eligible > 0 && rng.gen_bool(0.3) {
            vec![gen1[rng.gen_range(0..eligible)].1.clone()]
        } else {
            vec![SYNTH_INNOVATION_ID.to_string()]
        };
        if rng.gen_bool(0.1) {
            references.push(format!("EXT{}", rng.gen_range(0..50)));
        }
        let direct = references[0] == SYNTH_INNOVATION_ID;
        let id = b.push(dates[i], authors, references, domains[i]);
        if direct {
            gen1.push((dates[i], id));
        }
        truth.parents.insert(author_id(i), parent.map(author_id));
    }

    // Later solo papers: some cite the innovation again, some don't.
    for i in 0..n {
        if rng.gen_bool(0.25) {
            let date = offset(dates[i], rng.gen_range(1..=720))?;
            let refs = if rng.gen_bool(0.5) {
                vec![SYNTH_INNOVATION_ID.to_string()]
            } else {
                vec![]
            };
            b.push(date, vec![author_id(i)], refs, domains[i]);
        }
    }

    Ok(SynthCorpus {
        corpus: b.finish()?,
        truth,
    })
}

fn day(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// The six-paper worked example: innovation `I` and papers `P0`..`P4` by
/// authors `A`..`D`, giving a depth-3 tree.
pub fn fixture_f1() -> Corpus {
    let paper = |id: &str, date: NaiveDate, authors: &[&str], refs: &[&str]| PaperRecord {
        paper_id: id.into(),
        title: format!("Paper {id}"),
        pub_date: date,
        author_ids: authors.iter().map(|s| s.to_string()).collect(),
        references: refs.iter().map(|s| s.to_string()).collect(),
        fields_of_study: vec!["computer science".into()],
    };
    Corpus::new(
        vec![
            paper("I", day(2000, 1, 1), &["Z"], &[]),
            paper("P0", day(1999, 6, 1), &["B"], &[]),
            paper("P1", day(2001, 1, 1), &["A"], &["I"]),
            paper("P2", day(2002, 1, 1), &["A", "B"], &["I"]),
            paper("P3", day(2003, 1, 1), &["B", "C"], &["P1"]),
            paper("P4", day(2004, 1, 1), &["D"], &["I"]),
        ],
        "I",
    )
    .expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adoption::extract_adopters;
    use crate::corpus::citation_closure;
    use crate::metrics::cascade_virality;
    use crate::tree::build_tree;

    #[test]
    fn f1_contents() {
        let corpus = fixture_f1();
        let ids: Vec<_> = corpus.papers().map(|p| p.paper_id.as_str()).collect();
        assert_eq!(ids, ["I", "P0", "P1", "P2", "P3", "P4"]);
        assert_eq!(
            citation_closure(&corpus).into_iter().collect::<Vec<_>>(),
            ["P1", "P2", "P3", "P4"]
        );
        assert_eq!(extract_adopters(&corpus).len(), 4);
    }

    #[test]
    fn broadcast_regime_is_flat() {
        let s = generate(&SynthSpec::new(Regime::Broadcast, 100)).unwrap();
        let tree = build_tree(&extract_adopters(&s.corpus), s.corpus.innovation_id());
        assert_eq!(tree.layer_sizes(), vec![100]);
        assert_eq!(s.truth.depth(), 1);
    }

    #[test]
    fn chain_regime_depth_and_cascade() {
        let s = generate(&SynthSpec::new(Regime::Chain, 5)).unwrap();
        let tree = build_tree(&extract_adopters(&s.corpus), s.corpus.innovation_id());
        assert_eq!(tree.depth(), 5);
        assert_eq!(s.truth.depth(), 5);
        assert_eq!(cascade_virality::<f64>(&tree), 10.0);
    }

    #[test]
    fn mixed_is_deterministic_per_seed() {
        let mut spec = SynthSpec::new(Regime::Mixed, 200);
        spec.seed = 42;
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.corpus, b.corpus);
        assert_eq!(a.truth, b.truth);
        spec.seed = 43;
        assert_ne!(generate(&spec).unwrap().corpus, a.corpus);
    }

    #[test]
    fn mixed_truth_matches_builder() {
        for seed in 0..20 {
            let mut spec = SynthSpec::new(Regime::Mixed, 150);
            spec.seed = seed;
            spec.viral_fraction = 0.7;
            let s = generate(&spec).unwrap();
            let tree = build_tree(&extract_adopters(&s.corpus), s.corpus.innovation_id());
            let built: BTreeMap<String, Option<String>> =
                tree.nodes().map(|n| (n.author_id.clone(), n.parent.clone())).collect();
            assert_eq!(built, s.truth.parents, "seed {seed}");
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = SynthSpec::new(Regime::Mixed, 0);
        assert!(matches!(generate(&spec), Err(SynthError::NoAdopters)));
        spec.n_adopters = 3;
        spec.spacing_days = 0;
        assert!(matches!(generate(&spec), Err(SynthError::ZeroSpacing)));
        spec.spacing_days = 1;
        spec.viral_fraction = 1.5;
        assert!(matches!(generate(&spec), Err(SynthError::InvalidViralFraction(_))));
    }
}
