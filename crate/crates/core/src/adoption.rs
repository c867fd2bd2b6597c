//! Adopter profiles derived from the citation closure.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, CorpusError};

pub const UNKNOWN_DOMAIN: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdopterProfile {
    pub author_id: String,
    /// Date of the author's first paper in the citation closure.
    pub t_first_adopt: NaiveDate,
    /// Date of the author's earliest paper anywhere in the corpus.
    pub t_first_paper: NaiveDate,
    /// When the author's information source became available: the
    /// innovation's date for direct citers, otherwise the earliest
    /// first-generation paper cited by their first adopting paper(s).
    pub t_source: NaiveDate,
    pub coauthors: BTreeSet<String>,
    pub domain: String,
    pub n_direct_citations: usize,
    pub n_publications: usize,
}

/// A closure paper published before the innovation itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarlyAdoption {
    pub paper_id: String,
    pub pub_date: NaiveDate,
}

#[derive(Default)]
struct Accumulator {
    first_paper: Option<NaiveDate>,
    first_adopt: Option<NaiveDate>,
    publications: usize,
    direct: usize,
    direct_in_closure: bool,
    fields: BTreeMap<String, usize>,
    coauthors: BTreeSet<String>,
    closure_papers: Vec<(NaiveDate, String)>,
}

fn modal_domain(fields: &BTreeMap<String, usize>) -> String {
    // BTreeMap iterates alphabetically, so the first maximum wins ties.
    let mut best: Option<(&String, usize)> = None;
    for (tag, &count) in fields {
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((tag, count));
        }
    }
    best.map_or_else(|| UNKNOWN_DOMAIN.to_string(), |(tag, _)| tag.clone())
}

/// One profile per distinct author of a closure paper, sorted by author id.
pub fn extract_adopters(corpus: &Corpus) -> Vec<AdopterProfile> {
    let generations = corpus.generations();
    let innovation = corpus.innovation();
    let mut acc: BTreeMap<&str, Accumulator> = BTreeMap::new();

    for paper in corpus.papers() {
        let in_closure = generations.contains(&paper.paper_id);
        let direct = paper.paper_id != innovation.paper_id && paper.cites(&innovation.paper_id);
        let tags: BTreeSet<&str> = paper
            .fields_of_study
            .iter()
            .map(String::as_str)
            .filter(|t| !t.trim().is_empty())
            .collect();
        for author in &paper.author_ids {
            let entry = acc.entry(author.as_str()).or_default();
            entry.publications += 1;
            entry.first_paper = Some(entry.first_paper.map_or(paper.pub_date, |d| d.min(paper.pub_date)));
            if direct {
                entry.direct += 1;
            }
            for tag in &tags {
                *entry.fields.entry(tag.to_string()).or_default() += 1;
            }
            if in_closure {
                entry.first_adopt =
                    Some(entry.first_adopt.map_or(paper.pub_date, |d| d.min(paper.pub_date)));
                entry.direct_in_closure |= direct;
                entry.closure_papers.push((paper.pub_date, paper.paper_id.clone()));
                entry.coauthors.extend(
                    paper
                        .author_ids
                        .iter()
                        .filter(|a| *a != author)
                        .cloned(),
                );
            }
        }
    }

    acc.into_iter()
        .filter_map(|(author_id, a)| {
            let t_first_adopt = a.first_adopt?;
            let t_source = if a.direct_in_closure {
                innovation.pub_date
            } else {
                a.closure_papers
                    .iter()
                    .filter(|(date, _)| *date == t_first_adopt)
                    .flat_map(|(_, id)| corpus.get(id).into_iter().flat_map(|p| &p.references))
                    .filter(|r| generations.first.contains(r.as_str()))
                    .filter_map(|r| corpus.get(r).map(|p| p.pub_date))
                    .min()
                    .unwrap_or(innovation.pub_date)
            };
            Some(AdopterProfile {
                author_id: author_id.to_string(),
                t_first_adopt,
                t_first_paper: a.first_paper.unwrap_or(t_first_adopt),
                t_source,
                coauthors: a.coauthors,
                domain: modal_domain(&a.fields),
                n_direct_citations: a.direct,
                n_publications: a.publications,
            })
        })
        .collect()
}

/// Closure papers dated before the innovation (e.g. preprint artifacts).
pub fn early_adoptions(corpus: &Corpus) -> Vec<EarlyAdoption> {
    let start = corpus.innovation().pub_date;
    corpus
        .generations()
        .closure()
        .into_iter()
        .filter_map(|id| corpus.get(&id))
        .filter(|p| p.pub_date < start)
        .map(|p| EarlyAdoption {
            paper_id: p.paper_id.clone(),
            pub_date: p.pub_date,
        })
        .collect()
}

pub fn adopters_by_year(profiles: &[AdopterProfile]) -> BTreeMap<i32, usize> {
    let mut counts = BTreeMap::new();
    for p in profiles {
        *counts.entry(p.t_first_adopt.year()).or_insert(0) += 1;
    }
    counts
}

/// One row of the profiles CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub author_id: String,
    pub t_first_adopt: NaiveDate,
    pub t_first_paper: NaiveDate,
    pub t_source: NaiveDate,
    pub domain: String,
    pub n_direct_citations: usize,
    pub n_publications: usize,
}

impl From<&AdopterProfile> for ProfileRow {
    fn from(p: &AdopterProfile) -> Self {
        Self {
            author_id: p.author_id.clone(),
            t_first_adopt: p.t_first_adopt,
            t_first_paper: p.t_first_paper,
            t_source: p.t_source,
            domain: p.domain.clone(),
            n_direct_citations: p.n_direct_citations,
            n_publications: p.n_publications,
        }
    }
}

pub fn write_profiles_csv<W: Write>(profiles: &[AdopterProfile], writer: W) -> Result<(), CorpusError> {
    let mut wtr = csv::Writer::from_writer(writer);
    if profiles.is_empty() {
        wtr.write_record([
            "author_id",
            "t_first_adopt",
            "t_first_paper",
            "t_source",
            "domain",
            "n_direct_citations",
            "n_publications",
        ])?;
    }
    for p in profiles {
        wtr.serialize(ProfileRow::from(p))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_profiles_csv<R: Read>(reader: R) -> Result<Vec<ProfileRow>, CorpusError> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(CorpusError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;
    use crate::synth::fixture_f1;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn by_id(profiles: &[AdopterProfile]) -> BTreeMap<&str, &AdopterProfile> {
        profiles.iter().map(|p| (p.author_id.as_str(), p)).collect()
    }

    #[test]
    fn f1_adoption_times() {
        let profiles = extract_adopters(&fixture_f1());
        let p = by_id(&profiles);
        assert_eq!(p.keys().copied().collect::<Vec<_>>(), ["A", "B", "C", "D"]);
        assert_eq!(p["A"].t_first_adopt, date(2001, 1, 1));
        assert_eq!(p["B"].t_first_adopt, date(2002, 1, 1));
        assert_eq!(p["C"].t_first_adopt, date(2003, 1, 1));
        assert_eq!(p["D"].t_first_adopt, date(2004, 1, 1));
    }

    #[test]
    fn f1_coauthors() {
        let profiles = extract_adopters(&fixture_f1());
        let p = by_id(&profiles);
        let set = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(p["A"].coauthors, set(&["B"]));
        assert_eq!(p["B"].coauthors, set(&["A", "C"]));
        assert_eq!(p["C"].coauthors, set(&["B"]));
        assert!(p["D"].coauthors.is_empty());
    }

    #[test]
    fn f1_first_paper_source_and_counts() {
        let profiles = extract_adopters(&fixture_f1());
        let p = by_id(&profiles);
        assert_eq!(p["B"].t_first_paper, date(1999, 6, 1));
        assert_eq!(p["B"].n_publications, 3);
        assert_eq!(p["B"].n_direct_citations, 1);
        assert_eq!(p["A"].t_source, date(2000, 1, 1));
        assert_eq!(p["B"].t_source, date(2000, 1, 1));
        // C only cites P1.
        assert_eq!(p["C"].t_source, date(2001, 1, 1));
        assert_eq!(p["D"].t_source, date(2000, 1, 1));
    }

    #[test]
    fn f1_adopters_by_year() {
        let counts = adopters_by_year(&extract_adopters(&fixture_f1()));
        assert_eq!(counts, BTreeMap::from([(2001, 1), (2002, 1), (2003, 1), (2004, 1)]));
    }

    #[test]
    fn adopters_by_year_degenerate_cases() {
        assert!(adopters_by_year(&[]).is_empty());
        let mut profiles = extract_adopters(&fixture_f1());
        for p in &mut profiles {
            p.t_first_adopt = date(2005, 3, 1);
        }
        assert_eq!(adopters_by_year(&profiles), BTreeMap::from([(2005, 4)]));
    }

    fn paper(id: &str, d: NaiveDate, authors: &[&str], refs: &[&str], fields: &[&str]) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            title: id.into(),
            pub_date: d,
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            references: refs.iter().map(|s| s.to_string()).collect(),
            fields_of_study: fields.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn domain_is_modal_tag_with_alphabetical_ties() {
        let corpus = Corpus::new(
            vec![
                paper("I", date(2000, 1, 1), &["z"], &[], &[]),
                paper("P1", date(2001, 1, 1), &["a", "b"], &["I"], &["physics", "biology"]),
                paper("P2", date(2001, 6, 1), &["a"], &[], &["physics"]),
            ],
            "I",
        )
        .unwrap();
        let profiles = extract_adopters(&corpus);
        let p = by_id(&profiles);
        assert_eq!(p["a"].domain, "physics");
        assert_eq!(p["b"].domain, "biology");
    }

    #[test]
    fn author_without_tags_is_unknown() {
        let corpus = Corpus::new(
            vec![
                paper("I", date(2000, 1, 1), &["z"], &[], &[]),
                paper("P1", date(2001, 1, 1), &["a"], &["I"], &[]),
            ],
            "I",
        )
        .unwrap();
        assert_eq!(extract_adopters(&corpus)[0].domain, UNKNOWN_DOMAIN);
    }

    #[test]
    fn early_adoption_surfaced() {
        let corpus = Corpus::new(
            vec![
                paper("I", date(2000, 1, 1), &["z"], &[], &[]),
                paper("P1", date(1999, 1, 1), &["a"], &["I"], &[]),
                paper("P2", date(2001, 1, 1), &["b"], &["I"], &[]),
            ],
            "I",
        )
        .unwrap();
        let early = early_adoptions(&corpus);
        assert_eq!(early.len(), 1);
        assert_eq!(early[0].paper_id, "P1");
    }

    #[test]
    fn profiles_csv_round_trips() {
        let profiles = extract_adopters(&fixture_f1());
        let mut buf = Vec::new();
        write_profiles_csv(&profiles, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "author_id,t_first_adopt,t_first_paper,t_source,domain,n_direct_citations,n_publications\n"
        ));
        let rows = read_profiles_csv(buf.as_slice()).unwrap();
        assert_eq!(rows, profiles.iter().map(ProfileRow::from).collect::<Vec<_>>());
    }
}
