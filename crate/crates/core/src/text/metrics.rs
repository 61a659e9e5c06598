use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::{title_tokens, tokenize_title, StopWordList};
use crate::ingest::{Corpus, YearSlice};

/// Document frequency of one term in one year.
#[derive(Debug, Clone, PartialEq)]
pub struct TermStats {
    pub term: String,
    pub year: i32,
    pub doc_freq: usize,
    /// `100 * doc_freq / slice size`.
    pub percent: f64,
}

/// Two title terms scored by cosine, `term_a < term_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoWordPair {
    pub term_a: String,
    pub term_b: String,
    pub co_doc_freq: usize,
    pub df_a: usize,
    pub df_b: usize,
    pub cosine: f64,
}

/// A co-word pair absent from the former year, with its later-year share.
#[derive(Debug, Clone, PartialEq)]
pub struct NewCoWord {
    pub pair: CoWordPair,
    pub percent: f64,
}

/// Phrase frequency for one year.
#[derive(Debug, Clone, PartialEq)]
pub struct PhrasePoint {
    pub year: i32,
    pub doc_freq: usize,
    pub total: usize,
    /// Zero for a year without records.
    pub percent: f64,
}

fn percent(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

/// Tokenized titles of one slice.
struct SliceTerms {
    year: i32,
    size: usize,
    titles: Vec<BTreeSet<String>>,
}

impl SliceTerms {
    fn new(slice: &YearSlice, stop: &StopWordList) -> Self {
        SliceTerms {
            year: slice.year,
            size: slice.len(),
            titles: slice.records.iter().map(|r| tokenize_title(&r.title, stop)).collect(),
        }
    }

    fn doc_freqs(&self) -> BTreeMap<&str, usize> {
        let mut df = BTreeMap::new();
        for t in self.titles.iter().flatten() {
            *df.entry(t.as_str()).or_insert(0) += 1;
        }
        df
    }

    fn co_doc_freqs(&self) -> BTreeMap<(&str, &str), usize> {
        let mut co = BTreeMap::new();
        for title in &self.titles {
            let terms: Vec<&str> = title.iter().map(String::as_str).collect();
            for (i, &a) in terms.iter().enumerate() {
                for &b in &terms[i + 1..] {
                    *co.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        co
    }

    fn stats(&self) -> Vec<TermStats> {
        let mut out: Vec<TermStats> = self
            .doc_freqs()
            .into_iter()
            .map(|(term, doc_freq)| TermStats {
                term: term.to_string(),
                year: self.year,
                doc_freq,
                percent: percent(doc_freq, self.size),
            })
            .collect();
        out.sort_by(|a, b| b.doc_freq.cmp(&a.doc_freq).then_with(|| a.term.cmp(&b.term)));
        out
    }

    fn pairs(&self, min_cosine: f64) -> Vec<CoWordPair> {
        let df = self.doc_freqs();
        let mut out: Vec<CoWordPair> = self
            .co_doc_freqs()
            .into_iter()
            .filter_map(|((a, b), co)| {
                let (df_a, df_b) = (df[a], df[b]);
                let cosine = co as f64 / ((df_a * df_b) as f64).sqrt();
                (cosine >= min_cosine).then(|| CoWordPair {
                    term_a: a.to_string(),
                    term_b: b.to_string(),
                    co_doc_freq: co,
                    df_a,
                    df_b,
                    cosine,
                })
            })
            .collect();
        out.sort_by(cmp_pairs);
        out
    }
}

fn cmp_pairs(a: &CoWordPair, b: &CoWordPair) -> Ordering {
    b.cosine
        .total_cmp(&a.cosine)
        .then_with(|| (&a.term_a, &a.term_b).cmp(&(&b.term_a, &b.term_b)))
}

/// Per-term count of records whose title contains the term, sorted by
/// document frequency descending then term.
pub fn doc_frequencies(slice: &YearSlice, stop: &StopWordList) -> Vec<TermStats> {
    SliceTerms::new(slice, stop).stats()
}

/// Terms of `later` reaching `min_percent` that do not occur at all in
/// `former`, sorted by later-year percent descending then term.
pub fn new_terms(former: &YearSlice, later: &YearSlice, stop: &StopWordList, min_percent: f64) -> Vec<TermStats> {
    debug_assert!(min_percent >= 0.0);
    let before = SliceTerms::new(former, stop);
    let before = before.doc_freqs();
    // `stats()` is already ordered by doc_freq, which orders percent within one slice.
    SliceTerms::new(later, stop)
        .stats()
        .into_iter()
        .filter(|s| s.percent >= min_percent && !before.contains_key(s.term.as_str()))
        .collect()
}

/// Co-occurring term pairs with cosine at least `min_cosine`, sorted by
/// cosine descending then pair.
pub fn cosine_pairs(slice: &YearSlice, stop: &StopWordList, min_cosine: f64) -> Vec<CoWordPair> {
    debug_assert!((0.0..=1.0).contains(&min_cosine));
    SliceTerms::new(slice, stop).pairs(min_cosine)
}

/// Later-year co-word pairs meeting both thresholds that never co-occur in
/// a former-year title. Each word may occur alone in the former year.
/// Sorted by percent descending, then cosine descending, then pair.
pub fn new_coword_pairs(
    former: &YearSlice,
    later: &YearSlice,
    stop: &StopWordList,
    min_cosine: f64,
    min_percent: f64,
) -> Vec<NewCoWord> {
    let before = SliceTerms::new(former, stop);
    let before = before.co_doc_freqs();
    let after = SliceTerms::new(later, stop);
    let mut out: Vec<NewCoWord> = after
        .pairs(min_cosine)
        .into_iter()
        .filter(|p| !before.contains_key(&(p.term_a.as_str(), p.term_b.as_str())))
        .map(|pair| NewCoWord {
            percent: percent(pair.co_doc_freq, after.size),
            pair,
        })
        .filter(|n| n.percent >= min_percent)
        .collect();
    out.sort_by(|a, b| {
        b.pair
            .co_doc_freq
            .cmp(&a.pair.co_doc_freq)
            .then_with(|| cmp_pairs(&a.pair, &b.pair))
    });
    out
}

/// True when `head` is immediately followed by a token starting with `stem`.
fn has_phrase(tokens: &[String], head: &str, stem: &str) -> bool {
    tokens.windows(2).any(|w| w[0] == head && w[1].starts_with(stem))
}

/// Per year, the number of records whose title contains `head` directly
/// followed by a word starting with `stem_prefix`. Adjacency is judged on
/// the unfiltered token sequence.
pub fn phrase_trend(corpus: &Corpus, head: &str, stem_prefix: &str) -> Vec<PhrasePoint> {
    let head = head.to_lowercase();
    let stem = stem_prefix.to_lowercase();
    corpus
        .slices()
        .map(|slice| {
            let doc_freq = slice
                .records
                .iter()
                .filter(|r| has_phrase(&title_tokens(&r.title), &head, &stem))
                .count();
            PhrasePoint {
                year: slice.year,
                doc_freq,
                total: slice.len(),
                percent: percent(doc_freq, slice.len()),
            }
        })
        .collect()
}
