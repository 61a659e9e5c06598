//! Independent oracles and corpus generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use paradigm_shift::{BibRecord, RefKey, Source, YearSlice};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn ref_string(i: usize) -> String {
    format!("AUTHOR{i:02} X, {}, J TEST, V{}, P{}", 1950 + i % 20, i + 1, 100 + i)
}

/// A random slice of at most `max_papers` papers over at most `max_refs` references.
pub fn random_slice<R: Rng>(rng: &mut R, max_papers: usize, max_refs: usize) -> YearSlice {
    let n_papers = rng.gen_range(0..=max_papers);
    let n_refs = rng.gen_range(1..=max_refs);
    let density: f64 = rng.gen_range(0.05..0.6);
    let records = (0..n_papers)
        .map(|p| {
            let refs: Vec<String> = (0..n_refs).filter(|_| rng.gen_bool(density)).map(ref_string).collect();
            BibRecord::new(format!("P{p}"), Source::CitationIndex, "t", Some(1970)).with_refs(refs)
        })
        .collect();
    YearSlice::new(1970, records)
}

/// Brute force: enumerate every reference pair of every paper, count
/// citations and co-citations by scanning, then apply the threshold rule.
pub fn core_oracle(slice: &YearSlice, cite_min: usize, cocite_min: usize) -> BTreeSet<RefKey> {
    let papers: Vec<Vec<RefKey>> = slice.records.iter().map(|r| r.cited_refs.iter().cloned().collect()).collect();
    let mut universe: Vec<RefKey> = papers.iter().flatten().cloned().collect();
    universe.sort();
    universe.dedup();

    let cites = |k: &RefKey| papers.iter().filter(|p| p.contains(k)).count();
    let mut cocite: BTreeMap<(RefKey, RefKey), usize> = BTreeMap::new();
    for p in &papers {
        for a in p {
            for b in p {
                if a < b {
                    *cocite.entry((a.clone(), b.clone())).or_insert(0) += 1;
                }
            }
        }
    }

    let mut core = BTreeSet::new();
    for a in &universe {
        if cites(a) < cite_min {
            continue;
        }
        for b in &universe {
            if a == b || cites(b) < cite_min {
                continue;
            }
            let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            if cocite.get(&key).copied().unwrap_or(0) >= cocite_min {
                core.insert(a.clone());
                break;
            }
        }
    }
    core
}

/// Tokenizer written independently of the library: character scan,
/// ASCII-lowercase words of length >= 2 that are not all digits.
pub fn oracle_tokens(title: &str, stop: &[&str]) -> BTreeSet<String> {
    let mut words = Vec::new();
    let mut cur = String::new();
    for ch in title.chars().chain(std::iter::once(' ')) {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            words.push(std::mem::take(&mut cur));
        }
    }
    words
        .into_iter()
        .filter(|w| w.chars().count() >= 2)
        .filter(|w| !w.chars().all(|c| c.is_ascii_digit()))
        .filter(|w| !stop.contains(&w.as_str()))
        .collect()
}

pub struct TitleOracle {
    pub size: usize,
    pub titles: Vec<BTreeSet<String>>,
}

impl TitleOracle {
    pub fn new(titles: &[String], stop: &[&str]) -> Self {
        TitleOracle {
            size: titles.len(),
            titles: titles.iter().map(|t| oracle_tokens(t, stop)).collect(),
        }
    }

    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.titles.iter().flatten().cloned().collect()
    }

    pub fn df(&self, term: &str) -> usize {
        self.titles.iter().filter(|t| t.contains(term)).count()
    }

    pub fn co(&self, a: &str, b: &str) -> usize {
        self.titles.iter().filter(|t| t.contains(a) && t.contains(b)).count()
    }

    pub fn percent(&self, n: usize) -> f64 {
        100.0 * n as f64 / self.size as f64
    }

    /// All pairs `(a, b, co, cosine)` with `a < b` and co >= 1.
    pub fn pairs(&self) -> Vec<(String, String, usize, f64)> {
        let vocab: Vec<String> = self.vocabulary().into_iter().collect();
        let mut out = Vec::new();
        for (i, a) in vocab.iter().enumerate() {
            for b in &vocab[i + 1..] {
                let co = self.co(a, b);
                if co > 0 {
                    let cos = co as f64 / ((self.df(a) * self.df(b)) as f64).sqrt();
                    out.push((a.clone(), b.clone(), co, cos));
                }
            }
        }
        out
    }
}

pub fn titled_slice(year: i32, titles: &[String]) -> YearSlice {
    YearSlice::new(
        year,
        titles
            .iter()
            .enumerate()
            .map(|(i, t)| BibRecord::new(format!("{year}-{i}"), Source::Medline, t.clone(), Some(year)))
            .collect(),
    )
}

const WORDS: [&str; 12] = [
    "reverse", "transcriptase", "avian", "virus", "of", "in", "tumor", "mice", "RNA", "dna-polymerase", "1970", "x",
];

pub fn random_titles<R: Rng>(rng: &mut R, max_titles: usize) -> Vec<String> {
    let n = rng.gen_range(0..=max_titles);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..6);
            (0..len)
                .map(|_| WORDS[rng.gen_range(0..WORDS.len())])
                .collect::<Vec<_>>()
                .join(if rng.gen_bool(0.2) { ", " } else { " " })
        })
        .collect()
}

/// Renders records in the citation-index export layout.
pub fn to_citation_index_export(records: &[BibRecord]) -> String {
    let mut out = String::from("FN Synthetic\nVR 1.0\n");
    for r in records {
        out.push_str("PT J\n");
        out.push_str(&format!("TI {}\n", r.title));
        let mut refs = r.cited_refs.iter();
        if let Some(first) = refs.next() {
            out.push_str(&format!("CR {}\n", first.raw()));
            for k in refs {
                out.push_str(&format!("   {}\n", k.raw()));
            }
        }
        if let Some(y) = r.pub_year {
            out.push_str(&format!("PY {y}\n"));
        }
        out.push_str(&format!("UT {}\nER\n\n", r.record_id));
    }
    out.push_str("EF\n");
    out
}

/// Renders records in the MEDLINE layout.
pub fn to_medline_export(records: &[BibRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!("PMID- {}\n", r.record_id));
        if let Some(y) = r.pub_year {
            out.push_str(&format!("DP  - {y} Jan\n"));
        }
        out.push_str(&format!("TI  - {}\n\n", r.title));
    }
    out
}

/// Ten years (1966-1975) of citing papers whose gap-2 core sets overlap
/// least at 1970/1972 under each of the thresholds 6/5, 4/4, 3/3 and 2/2.
///
/// Every year has six papers. Four reference tiers are cited by 6, 4, 3 and
/// 2 of them; each tier draws its members from an "old" pool (years up to
/// 1970), a half-old half-new mix (1971), or the "new" pool plus one old
/// reference (1972 on).
pub fn groove_corpus() -> Vec<BibRecord> {
    let tiers = [6usize, 4, 3, 2];
    let mut records = Vec::new();
    for year in 1966..=1975 {
        let mut papers: Vec<Vec<String>> = vec![Vec::new(); 6];
        for (t, &cited_by) in tiers.iter().enumerate() {
            let old = |i: usize| format!("OLD{t}{i} A, 1960, J OLD, V{t}, P{i}");
            let new = |i: usize| format!("NEW{t}{i} B, 1970, J NEW, V{t}, P{i}");
            let members: Vec<String> = match year {
                ..=1970 => (0..4).map(old).collect(),
                1971 => vec![old(0), old(1), new(0), new(1)],
                _ => (0..4).map(new).chain([old(0)]).collect(),
            };
            for p in papers.iter_mut().take(cited_by) {
                p.extend(members.iter().cloned());
            }
        }
        for (i, refs) in papers.into_iter().enumerate() {
            records.push(
                BibRecord::new(
                    format!("WOS:{year}{i:02}"),
                    Source::CitationIndex,
                    format!("Synthetic paper {i} of {year}"),
                    Some(year),
                )
                .with_refs(refs),
            );
        }
    }
    records
}

pub const GROOVE_THRESHOLDS: &str = "6/5,4/4,3/3,2/2";
