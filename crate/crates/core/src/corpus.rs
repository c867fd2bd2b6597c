//! Bibliographic record ingestion, author-identity merges and the citation
//! closure around the innovation paper.
//!
//! Records are read one JSON object per line:
//!
//! ```text
//! {"paper_id": "P1", "title": "...", "pub_date": "2001-01-01",
//!  "author_ids": ["A"], "references": ["I"], "fields_of_study": ["cs"]}
//! ```

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Records above this share of malformed lines abort the load.
pub const MAX_MALFORMED_SHARE: f64 = 0.10;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}")]
    Io { path: PathBuf, source: io::Error },
    #[error("i/o error: {0}")]
    Stream(#[from] io::Error),
    #[error("innovation paper `{0}` is not in the corpus")]
    MissingInnovation(String),
    #[error("{malformed} of {lines} lines are malformed (first at line {first_line}: {first_reason})")]
    TooManyMalformed {
        malformed: usize,
        lines: usize,
        first_line: usize,
        first_reason: String,
    },
    #[error("duplicate paper id `{0}`")]
    DuplicatePaper(String),
    #[error("invalid record `{paper_id}`: {reason}")]
    InvalidRecord { paper_id: String, reason: String },
    #[error("merge map chains `{raw}` -> `{canonical}`, but `{canonical}` is itself merged")]
    ChainedMerge { raw: String, canonical: String },
    #[error("merge map: {0}")]
    MergeMap(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CorpusError> = std::result::Result<T, E>;

pub fn min_pub_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(1900, 1, 1).unwrap()
}

pub fn max_pub_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2100, 1, 1).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub title: String,
    pub pub_date: NaiveDate,
    pub author_ids: Vec<String>,
    #[serde(default)]
    pub references: Vec<String>,
    #[serde(default)]
    pub fields_of_study: Vec<String>,
}

impl PaperRecord {
    pub fn cites(&self, paper_id: &str) -> bool {
        self.references.iter().any(|r| r == paper_id)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| CorpusError::InvalidRecord {
            paper_id: self.paper_id.clone(),
            reason: reason.to_string(),
        };
        if self.author_ids.is_empty() {
            return Err(invalid("empty author list"));
        }
        let mut seen = HashSet::new();
        if !self.author_ids.iter().all(|a| seen.insert(a.as_str())) {
            return Err(invalid("duplicate author id"));
        }
        if self.pub_date < min_pub_date() || self.pub_date > max_pub_date() {
            return Err(invalid("publication date out of range"));
        }
        Ok(())
    }
}

/// One-level mapping from raw author ids to canonical ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeMap {
    map: BTreeMap<String, String>,
}

impl MergeMap {
    /// Builds a map, rejecting chains (a target that is itself a key).
    /// Identity entries are dropped.
    pub fn new<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (raw, canonical) in pairs {
            let (raw, canonical) = (raw.into(), canonical.into());
            if raw == canonical {
                continue;
            }
            if let Some(prev) = map.get(&raw) {
                if prev != &canonical {
                    return Err(CorpusError::MergeMap(format!(
                        "`{raw}` mapped to both `{prev}` and `{canonical}`"
                    )));
                }
            }
            map.insert(raw, canonical);
        }
        for (raw, canonical) in &map {
            if map.contains_key(canonical) {
                return Err(CorpusError::ChainedMerge {
                    raw: raw.clone(),
                    canonical: canonical.clone(),
                });
            }
        }
        Ok(Self { map })
    }

    /// Reads the two-column `raw_id,canonical_id` CSV (header required).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "raw_id" || &headers[1] != "canonical_id" {
            return Err(CorpusError::MergeMap(format!(
                "expected header `raw_id,canonical_id`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut pairs = Vec::new();
        for record in rdr.records() {
            let record = record?;
            if record.len() != 2 || record[0].is_empty() || record[1].is_empty() {
                return Err(CorpusError::MergeMap(format!(
                    "malformed row at line {}",
                    record.position().map_or(0, |p| p.line())
                )));
            }
            pairs.push((record[0].to_string(), record[1].to_string()));
        }
        Self::new(pairs)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(BufReader::new(file))
    }

    pub fn canonical<'a>(&'a self, author_id: &'a str) -> &'a str {
        self.map.get(author_id).map_or(author_id, String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub line: usize,
    pub reason: String,
}

/// What happened while loading a record file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Non-blank lines seen.
    pub lines: usize,
    pub loaded: usize,
    /// Records missing a title, every author, or the date.
    pub dropped: usize,
    pub malformed: Vec<MalformedLine>,
    /// Papers whose date was given as a bare year and normalized to Jan 1.
    pub year_only: Vec<String>,
    /// Papers whose author list contained repeats that were collapsed.
    pub deduplicated_authors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    papers: BTreeMap<String, PaperRecord>,
    innovation_id: String,
    merge_map: Option<MergeMap>,
}

/// Citation closure split by generation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Generations {
    /// Papers citing the innovation.
    pub first: BTreeSet<String>,
    /// Papers citing a first-generation paper but not the innovation.
    pub second: BTreeSet<String>,
}

impl Generations {
    pub fn contains(&self, paper_id: &str) -> bool {
        self.first.contains(paper_id) || self.second.contains(paper_id)
    }

    pub fn closure(&self) -> BTreeSet<String> {
        self.first.union(&self.second).cloned().collect()
    }
}

impl Corpus {
    pub fn new<I>(papers: I, innovation_id: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = PaperRecord>,
    {
        let mut map = BTreeMap::new();
        for paper in papers {
            paper.validate()?;
            if map.contains_key(&paper.paper_id) {
                return Err(CorpusError::DuplicatePaper(paper.paper_id));
            }
            map.insert(paper.paper_id.clone(), paper);
        }
        let innovation_id = innovation_id.into();
        if !map.contains_key(&innovation_id) {
            return Err(CorpusError::MissingInnovation(innovation_id));
        }
        Ok(Self {
            papers: map,
            innovation_id,
            merge_map: None,
        })
    }

    pub fn innovation_id(&self) -> &str {
        &self.innovation_id
    }

    pub fn innovation(&self) -> &PaperRecord {
        &self.papers[&self.innovation_id]
    }

    pub fn merge_map(&self) -> Option<&MergeMap> {
        self.merge_map.as_ref()
    }

    pub fn get(&self, paper_id: &str) -> Option<&PaperRecord> {
        self.papers.get(paper_id)
    }

    /// Papers in ascending `paper_id` order.
    pub fn papers(&self) -> impl Iterator<Item = &PaperRecord> {
        self.papers.values()
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// `(citing paper, missing id)` for every reference that does not
    /// resolve inside the corpus.
    pub fn dangling_references(&self) -> BTreeSet<(String, String)> {
        self.papers
            .values()
            .flat_map(|p| {
                p.references
                    .iter()
                    .filter(|r| !self.papers.contains_key(r.as_str()))
                    .map(move |r| (p.paper_id.clone(), r.clone()))
            })
            .collect()
    }

    pub fn generations(&self) -> Generations {
        let innovation = self.innovation_id.as_str();
        let first: BTreeSet<String> = self
            .papers
            .values()
            .filter(|p| p.paper_id != innovation && p.cites(innovation))
            .map(|p| p.paper_id.clone())
            .collect();
        let second = self
            .papers
            .values()
            .filter(|p| p.paper_id != innovation && !first.contains(&p.paper_id))
            .filter(|p| p.references.iter().any(|r| first.contains(r)))
            .map(|p| p.paper_id.clone())
            .collect();
        Generations { first, second }
    }

    /// Copy of the corpus without the given papers. The innovation is
    /// always kept.
    pub fn without(&self, removed: &BTreeSet<String>) -> Corpus {
        let papers = self
            .papers
            .iter()
            .filter(|(id, _)| id.as_str() == self.innovation_id || !removed.contains(*id))
            .map(|(id, p)| (id.clone(), p.clone()))
            .collect();
        Corpus {
            papers,
            innovation_id: self.innovation_id.clone(),
            merge_map: self.merge_map.clone(),
        }
    }
}

#[derive(Deserialize)]
struct RawRecord {
    paper_id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    pub_date: Option<String>,
    #[serde(default)]
    author_ids: Option<Vec<String>>,
    #[serde(default)]
    references: Option<Vec<String>>,
    #[serde(default)]
    fields_of_study: Option<Vec<String>>,
}

enum LineOutcome {
    Record(PaperRecord, bool),
    Dropped,
}

/// Parses `YYYY-MM-DD`, or a bare `YYYY` normalized to January 1. The flag
/// reports the year-only case.
pub fn parse_pub_date(text: &str) -> Option<(NaiveDate, bool)> {
    let text = text.trim();
    if let Ok(date) = NaiveDate::parse_from_str(text, "%Y-%m-%d") {
        return Some((date, false));
    }
    if text.len() == 4 && text.bytes().all(|b| b.is_ascii_digit()) {
        let year: i32 = text.parse().ok()?;
        return NaiveDate::from_ymd_opt(year, 1, 1).map(|d| (d, true));
    }
    None
}

fn parse_line(line: &str) -> std::result::Result<LineOutcome, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let paper_id = match raw.paper_id {
        Some(id) if !id.trim().is_empty() => id,
        _ => return Err("missing paper_id".into()),
    };
    let title = raw.title.filter(|t| !t.trim().is_empty());
    let authors: Vec<String> = raw
        .author_ids
        .unwrap_or_default()
        .into_iter()
        .filter(|a| !a.trim().is_empty())
        .collect();
    let date_text = raw.pub_date.filter(|d| !d.trim().is_empty());
    let (Some(title), Some(date_text)) = (title, date_text) else {
        return Ok(LineOutcome::Dropped);
    };
    if authors.is_empty() {
        return Ok(LineOutcome::Dropped);
    }
    let (pub_date, year_only) =
        parse_pub_date(&date_text).ok_or_else(|| format!("unparseable pub_date `{date_text}`"))?;
    if pub_date < min_pub_date() || pub_date > max_pub_date() {
        return Err(format!("pub_date {pub_date} outside [1900-01-01, 2100-01-01]"));
    }
    Ok(LineOutcome::Record(
        PaperRecord {
            paper_id,
            title,
            pub_date,
            author_ids: authors,
            references: raw.references.unwrap_or_default(),
            fields_of_study: raw.fields_of_study.unwrap_or_default(),
        },
        year_only,
    ))
}

/// Reads line-delimited records. Malformed lines are reported and skipped
/// unless they exceed [`MAX_MALFORMED_SHARE`] of the non-blank lines.
pub fn read_corpus<R: BufRead>(reader: R, innovation_id: &str) -> Result<(Corpus, LoadReport)> {
    let mut report = LoadReport::default();
    let mut papers: BTreeMap<String, PaperRecord> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.lines += 1;
        let line_no = idx + 1;
        match parse_line(&line) {
            Ok(LineOutcome::Dropped) => report.dropped += 1,
            Ok(LineOutcome::Record(mut paper, year_only)) => {
                if papers.contains_key(&paper.paper_id) {
                    report.malformed.push(MalformedLine {
                        line: line_no,
                        reason: format!("duplicate paper_id `{}`", paper.paper_id),
                    });
                    continue;
                }
                let mut seen = HashSet::new();
                let before = paper.author_ids.len();
                paper.author_ids.retain(|a| seen.insert(a.clone()));
                if paper.author_ids.len() != before {
                    report.deduplicated_authors.push(paper.paper_id.clone());
                }
                if year_only {
                    report.year_only.push(paper.paper_id.clone());
                }
                papers.insert(paper.paper_id.clone(), paper);
            }
            Err(reason) => report.malformed.push(MalformedLine {
                line: line_no,
                reason,
            }),
        }
    }
    if report.malformed.len() as f64 > MAX_MALFORMED_SHARE * report.lines as f64 {
        let first = &report.malformed[0];
        return Err(CorpusError::TooManyMalformed {
            malformed: report.malformed.len(),
            lines: report.lines,
            first_line: first.line,
            first_reason: first.reason.clone(),
        });
    }
    report.loaded = papers.len();
    let corpus = Corpus::new(papers.into_values(), innovation_id)?;
    Ok((corpus, report))
}

pub fn load_corpus(path: &Path, innovation_id: &str) -> Result<(Corpus, LoadReport)> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_corpus(BufReader::new(file), innovation_id)
}

/// Writes the corpus in the line-delimited record format, ascending by id.
pub fn write_corpus<W: Write>(corpus: &Corpus, mut writer: W) -> Result<()> {
    for paper in corpus.papers() {
        serde_json::to_writer(&mut writer, paper)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Rewrites every merged author id to its canonical id, collapsing repeats
/// inside a single author list.
pub fn apply_merges(corpus: &Corpus, merge_map: &MergeMap) -> Corpus {
    let papers = corpus
        .papers
        .iter()
        .map(|(id, paper)| {
            let mut seen = HashSet::new();
            let author_ids = paper
                .author_ids
                .iter()
                .map(|a| merge_map.canonical(a).to_string())
                .filter(|a| seen.insert(a.clone()))
                .collect();
            (
                id.clone(),
                PaperRecord {
                    author_ids,
                    ..paper.clone()
                },
            )
        })
        .collect();
    Corpus {
        papers,
        innovation_id: corpus.innovation_id.clone(),
        merge_map: Some(merge_map.clone()),
    }
}

/// Generation-1 and generation-2 papers around the innovation, excluding
/// the innovation itself.
pub fn citation_closure(corpus: &Corpus) -> BTreeSet<String> {
    corpus.generations().closure()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, date: &str, authors: &[&str], refs: &[&str]) -> String {
        serde_json::json!({
            "paper_id": id,
            "title": format!("title {id}"),
            "pub_date": date,
            "author_ids": authors,
            "references": refs,
            "fields_of_study": ["cs"],
        })
        .to_string()
    }

    fn load(lines: &[String], innovation: &str) -> Result<(Corpus, LoadReport)> {
        read_corpus(lines.join("\n").as_bytes(), innovation)
    }

    fn paper(id: &str, authors: &[&str]) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            title: id.into(),
            pub_date: NaiveDate::from_ymd_opt(2001, 1, 1).unwrap(),
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            references: vec![],
            fields_of_study: vec![],
        }
    }

    #[test]
    fn four_wellformed_records() {
        let lines = vec![
            rec("I", "2000-01-01", &["z"], &[]),
            rec("P1", "2001-01-01", &["a"], &["I"]),
            rec("P2", "2002-01-01", &["b"], &["I"]),
            rec("P3", "2003-01-01", &["c"], &["P1"]),
        ];
        let (corpus, report) = load(&lines, "I").unwrap();
        assert_eq!(corpus.len(), 4);
        assert_eq!(report.dropped, 0);
        assert!(report.malformed.is_empty());
    }

    #[test]
    fn record_missing_date_is_dropped() {
        let mut lines = vec![
            rec("I", "2000-01-01", &["z"], &[]),
            rec("P1", "2001-01-01", &["a"], &["I"]),
            rec("P2", "2002-01-01", &["b"], &["I"]),
            rec("P3", "2003-01-01", &["c"], &["P1"]),
        ];
        lines.push(r#"{"paper_id":"P4","title":"t","author_ids":["d"],"references":["I"]}"#.into());
        let (corpus, report) = load(&lines, "I").unwrap();
        assert_eq!(corpus.len(), 4);
        assert_eq!(report.dropped, 1);
    }

    #[test]
    fn missing_title_or_authors_dropped() {
        let lines = vec![
            rec("I", "2000-01-01", &["z"], &[]),
            r#"{"paper_id":"X","title":"","pub_date":"2001-01-01","author_ids":["a"]}"#.into(),
            r#"{"paper_id":"Y","title":"t","pub_date":"2001-01-01","author_ids":[]}"#.into(),
        ];
        let (corpus, report) = load(&lines, "I").unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(report.dropped, 2);
    }

    #[test]
    fn year_only_date_normalized_and_flagged() {
        let lines = vec![
            rec("I", "2000", &["z"], &[]),
            rec("P1", "2001-03-04", &["a"], &["I"]),
        ];
        let (corpus, report) = load(&lines, "I").unwrap();
        assert_eq!(
            corpus.innovation().pub_date,
            NaiveDate::from_ymd_opt(2000, 1, 1).unwrap()
        );
        assert_eq!(report.year_only, vec!["I".to_string()]);
    }

    #[test]
    fn malformed_line_reported_with_line_number() {
        let mut lines: Vec<String> = (0..12)
            .map(|i| rec(&format!("P{i}"), "2001-01-01", &["a"], &["I"]))
            .collect();
        lines.insert(0, rec("I", "2000-01-01", &["z"], &[]));
        lines.insert(3, "{not json".into());
        let (corpus, report) = load(&lines, "I").unwrap();
        assert_eq!(corpus.len(), 13);
        assert_eq!(report.malformed.len(), 1);
        assert_eq!(report.malformed[0].line, 4);
    }

    #[test]
    fn too_many_malformed_lines_abort() {
        let lines = vec![
            rec("I", "2000-01-01", &["z"], &[]),
            "garbage".into(),
            rec("P1", "2001-01-01", &["a"], &["I"]),
            r#"{"paper_id":"Q","title":"t","pub_date":"1850-01-01","author_ids":["a"]}"#.into(),
        ];
        let err = load(&lines, "I").unwrap_err();
        assert!(matches!(err, CorpusError::TooManyMalformed { malformed: 2, lines: 4, .. }));
    }

    #[test]
    fn missing_innovation_is_an_error() {
        let lines = vec![rec("P1", "2001-01-01", &["a"], &["I"])];
        assert!(matches!(load(&lines, "I"), Err(CorpusError::MissingInnovation(_))));
    }

    #[test]
    fn unreadable_file_is_an_error() {
        let err = load_corpus(Path::new("/nonexistent/corpus.jsonl"), "I").unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn duplicate_authors_collapse_on_load() {
        let lines = vec![
            rec("I", "2000-01-01", &["z"], &[]),
            rec("P1", "2001-01-01", &["a", "b", "a"], &["I"]),
        ];
        let (corpus, report) = load(&lines, "I").unwrap();
        assert_eq!(corpus.get("P1").unwrap().author_ids, vec!["a", "b"]);
        assert_eq!(report.deduplicated_authors, vec!["P1".to_string()]);
    }

    #[test]
    fn merge_collapses_duplicate_authors() {
        let corpus = Corpus::new(vec![paper("I", &["a1", "a2"])], "I").unwrap();
        let map = MergeMap::new([("a2", "a1")]).unwrap();
        let merged = apply_merges(&corpus, &map);
        assert_eq!(merged.get("I").unwrap().author_ids, vec!["a1"]);
    }

    #[test]
    fn empty_merge_map_is_identity_on_papers() {
        let corpus = Corpus::new(vec![paper("I", &["a1", "a2"])], "I").unwrap();
        let merged = apply_merges(&corpus, &MergeMap::default());
        assert_eq!(merged.papers().collect::<Vec<_>>(), corpus.papers().collect::<Vec<_>>());
    }

    #[test]
    fn merge_moves_paper_counts() {
        let corpus = Corpus::new(
            vec![
                paper("I", &["a1"]),
                paper("P1", &["a3"]),
                paper("P2", &["a3", "b"]),
            ],
            "I",
        )
        .unwrap();
        let count = |c: &Corpus, id: &str| {
            c.papers()
                .filter(|p| p.author_ids.iter().any(|a| a == id))
                .count()
        };
        let before = count(&corpus, "a1");
        let moved = count(&corpus, "a3");
        let merged = apply_merges(&corpus, &MergeMap::new([("a3", "a1")]).unwrap());
        assert_eq!(moved, 2);
        assert_eq!(count(&merged, "a1"), before + 2);
        assert_eq!(count(&merged, "a3"), 0);
    }

    #[test]
    fn chained_merge_rejected() {
        let err = MergeMap::new([("a3", "a2"), ("a2", "a1")]).unwrap_err();
        assert!(matches!(err, CorpusError::ChainedMerge { .. }));
    }

    #[test]
    fn merge_map_csv_requires_header() {
        let ok = MergeMap::from_csv_reader("raw_id,canonical_id\na2,a1\n".as_bytes()).unwrap();
        assert_eq!(ok.canonical("a2"), "a1");
        assert_eq!(ok.canonical("zz"), "zz");
        assert!(MergeMap::from_csv_reader("a2,a1\n".as_bytes()).is_err());
    }

    #[test]
    fn empty_closure_when_nobody_cites() {
        let corpus = Corpus::new(vec![paper("I", &["a"]), paper("P", &["b"])], "I").unwrap();
        assert!(citation_closure(&corpus).is_empty());
    }

    #[test]
    fn paper_citing_innovation_and_gen1_counted_once() {
        let mut p1 = paper("P1", &["a"]);
        p1.references = vec!["I".into()];
        let mut p2 = paper("P2", &["b"]);
        p2.references = vec!["I".into(), "P1".into()];
        let corpus = Corpus::new(vec![paper("I", &["z"]), p1, p2], "I").unwrap();
        let gens = corpus.generations();
        assert_eq!(gens.first.len(), 2);
        assert!(gens.second.is_empty());
        assert_eq!(citation_closure(&corpus).len(), 2);
    }

    #[test]
    fn dangling_references_kept_but_never_expand_closure() {
        let mut p1 = paper("P1", &["a"]);
        p1.references = vec!["I".into(), "GHOST".into()];
        let mut p2 = paper("P2", &["b"]);
        p2.references = vec!["GHOST".into()];
        let corpus = Corpus::new(vec![paper("I", &["z"]), p1, p2], "I").unwrap();
        assert_eq!(corpus.get("P1").unwrap().references.len(), 2);
        assert_eq!(corpus.dangling_references().len(), 2);
        assert_eq!(citation_closure(&corpus), BTreeSet::from(["P1".to_string()]));
    }
}
