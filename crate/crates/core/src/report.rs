//! TSV report rendering.
//!
//! Every table starts with a `#`-prefixed line of `key=value` settings,
//! followed by a header row. Lines end with `\n`; tabs and newlines inside
//! cells are escaped as `\t` and `\n`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::citation_graph::{CoreRefSet, Ranked, RefPair, ThresholdPair};
use crate::ingest::{Corpus, Linkage, LinkStatus};
use crate::record::Source;
use crate::refkey::RefKey;
use crate::stability::{GrooveReport, RsiPoint, RsiSeries, UNDEFINED_CELL};
use crate::text::{NewCoWord, PhrasePoint, TermStats};

/// Missing value in a table cell.
pub const NA: &str = "-";

#[derive(Debug, Clone, Default)]
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn escape_cell(s: &str) -> String {
    if s.contains(['\t', '\n', '\r', '\\']) {
        s.replace('\\', "\\\\")
            .replace('\t', "\\t")
            .replace('\n', "\\n")
            .replace('\r', "\\r")
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Table::default()
        }
    }

    pub fn meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn with_meta(mut self, meta: &[(String, String)]) -> Self {
        self.meta.extend(meta.iter().cloned());
        self
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn render(&self) -> String {
        let mut out = String::from("#");
        for (i, (k, v)) in self.meta.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{k}={}", escape_cell(v));
        }
        out.push('\n');
        let line = |cells: &[String]| cells.iter().map(|c| escape_cell(c)).collect::<Vec<_>>().join("\t");
        out.push_str(&line(&self.columns));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| NA.to_string(), |v| v.to_string())
}

const REF_COLUMNS: [&str; 6] = ["author", "cited_year", "source", "volume", "first_page", "reference"];

fn ref_cells(k: &RefKey) -> [String; 6] {
    [
        k.author().to_string(),
        opt(k.year()),
        opt(k.source_abbrev()),
        opt(k.volume()),
        opt(k.first_page()),
        k.normalized().to_string(),
    ]
}

/// Cited references with their citing-paper counts.
pub fn citation_table(year: i32, ranked: &[Ranked]) -> Table {
    let mut t = Table::new(["year", "rank"].into_iter().chain(REF_COLUMNS).chain(["count"]));
    for (i, r) in ranked.iter().enumerate() {
        if let Ranked::Cited { key, count } = r {
            let mut row = vec![year.to_string(), (i + 1).to_string()];
            row.extend(ref_cells(key));
            row.push(count.to_string());
            t.push(row);
        }
    }
    t
}

/// Co-cited pairs with their counts.
pub fn cocitation_table(year: i32, ranked: &[Ranked]) -> Table {
    let mut t = Table::new(["year", "rank", "reference_a", "reference_b", "count"]);
    for (i, r) in ranked.iter().enumerate() {
        if let Ranked::Cocited { pair, count } = r {
            t.push([
                year.to_string(),
                (i + 1).to_string(),
                pair.first().normalized().to_string(),
                pair.second().normalized().to_string(),
                count.to_string(),
            ]);
        }
    }
    t
}

/// Arbitrary co-citation counts, e.g. from [`cocitation_counts`](crate::cocitation_counts).
pub fn cocitation_count_table<'a>(year: i32, counts: impl IntoIterator<Item = (&'a RefPair, &'a usize)>) -> Table {
    let ranked: Vec<Ranked> = counts
        .into_iter()
        .map(|(p, &c)| Ranked::Cocited { pair: p.clone(), count: c })
        .collect();
    cocitation_table(year, &ranked)
}

/// One row per core reference.
pub fn core_set_table(sets: &[CoreRefSet]) -> Table {
    let mut t = Table::new(["year", "thresholds"].into_iter().chain(REF_COLUMNS));
    for set in sets {
        for k in &set.members {
            let mut row = vec![set.year.to_string(), set.thresholds.to_string()];
            row.extend(ref_cells(k));
            t.push(row);
        }
    }
    t
}

/// Core references shared by two years, with every threshold pair under
/// which they are shared.
pub fn shared_core_table(former: i32, later: i32, per_threshold: &[(ThresholdPair, BTreeSet<RefKey>)]) -> Table {
    let all: BTreeSet<&RefKey> = per_threshold.iter().flat_map(|(_, s)| s.iter()).collect();
    let mut t = Table::new(["interval"].into_iter().chain(REF_COLUMNS).chain(["thresholds"]));
    for k in all {
        let under: Vec<String> = per_threshold
            .iter()
            .filter(|(_, s)| s.contains(k))
            .map(|(p, _)| p.to_string())
            .collect();
        let mut row = vec![format!("{former}/{later}")];
        row.extend(ref_cells(k));
        row.push(under.join(","));
        t.push(row);
    }
    t
}

fn rsi_full(p: &RsiPoint) -> String {
    p.rsi().map_or_else(|| UNDEFINED_CELL.to_string(), |v| v.to_string())
}

/// Long format: one row per RSI point.
pub fn rsi_table(series: &RsiSeries) -> Table {
    let mut t = Table::new([
        "thresholds",
        "former_year",
        "later_year",
        "n_former",
        "n_later",
        "shared",
        "rsi_full",
        "rsi_2dp",
    ])
    .meta("thresholds", series.thresholds)
    .meta("gap", series.gap);
    for p in &series.points {
        t.push([
            series.thresholds.to_string(),
            p.former_year.to_string(),
            p.later_year.to_string(),
            p.n_former.to_string(),
            p.n_later.to_string(),
            p.shared.to_string(),
            rsi_full(p),
            p.rsi_2dp(),
        ]);
    }
    t
}

/// Threshold rows by interval columns with `sh/RSI` cells.
///
/// For consecutive years (gap 1) the year columns carry core-set sizes
/// between the `sh/RSI` columns; otherwise only intervals are listed.
pub fn rsi_matrix(series: &[RsiSeries]) -> Table {
    let Some(first) = series.first() else {
        return Table::new(["thresholds"]);
    };
    let mut columns = vec!["thresholds".to_string()];
    if first.gap == 1 {
        for p in &first.points {
            columns.push(p.former_year.to_string());
            columns.push(format!("sh/RSI {}/{}", p.former_year, p.later_year));
        }
        if let Some(last) = first.points.last() {
            columns.push(last.later_year.to_string());
        }
    } else {
        columns.extend(first.points.iter().map(|p| p.interval().to_string()));
    }

    let mut t = Table::new(columns).meta("gap", first.gap);
    for s in series {
        let mut row = vec![s.thresholds.to_string()];
        if s.gap == 1 {
            for p in &s.points {
                row.push(p.n_former.to_string());
                row.push(p.cell());
            }
            if let Some(last) = s.points.last() {
                row.push(last.n_later.to_string());
            }
        } else {
            row.extend(s.points.iter().map(RsiPoint::cell));
        }
        t.push(row);
    }
    t
}

/// Minimal RSI per series; a final `consensus` row when several series
/// were compared.
pub fn groove_table(report: &GrooveReport) -> Table {
    let mut t = Table::new(["thresholds", "min_rsi_full", "min_rsi_2dp", "intervals"]).meta("gap", report.gap);
    for m in &report.minima {
        let p = &m.points[0];
        t.push([
            m.thresholds.to_string(),
            rsi_full(p),
            p.rsi_2dp(),
            join_intervals(m.intervals()),
        ]);
    }
    if report.minima.len() > 1 {
        let verdict = if report.has_consensus() {
            join_intervals(report.consensus.clone())
        } else {
            "none".to_string()
        };
        t.push(["consensus".to_string(), NA.to_string(), NA.to_string(), verdict]);
    }
    t
}

fn join_intervals(v: Vec<crate::stability::Interval>) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Papers per year and source, and distinct cited references per year.
pub fn corpus_summary(corpus: &Corpus) -> Table {
    let mut t = Table::new([
        "publication_years",
        "papers_citation_index",
        "papers_medline",
        "distinct_cited_refs",
    ]);
    let mut all_refs: BTreeSet<&RefKey> = BTreeSet::new();
    let (mut ci, mut med) = (0, 0);
    for s in corpus.slices() {
        let refs: BTreeSet<&RefKey> = s.records.iter().flat_map(|r| r.cited_refs.iter()).collect();
        let (a, b) = (s.count_source(Source::CitationIndex), s.count_source(Source::Medline));
        ci += a;
        med += b;
        t.push([s.year.to_string(), a.to_string(), b.to_string(), refs.len().to_string()]);
        all_refs.extend(refs);
    }
    let range = corpus.year_range();
    t.push([
        format!("{} - {}", range.min, range.max),
        ci.to_string(),
        med.to_string(),
        all_refs.len().to_string(),
    ]);
    t
}

pub fn linkage_table(linkage: &Linkage) -> Table {
    let coverage = linkage.coverage().map_or_else(|| NA.to_string(), |c| format!("{c:.4}"));
    let mut t = Table::new(["medline_id", "status", "index_ids"])
        .meta("matched", linkage.matched())
        .meta("ambiguous", linkage.ambiguous())
        .meta("unmatched", linkage.unmatched())
        .meta("coverage", coverage);
    for (id, status) in &linkage.entries {
        let (s, ids) = match status {
            LinkStatus::Matched(u) => ("matched", u.clone()),
            LinkStatus::Unmatched => ("unmatched", NA.to_string()),
            LinkStatus::Ambiguous(us) => ("ambiguous", us.join(",")),
        };
        t.push([id.clone(), s.to_string(), ids]);
    }
    t
}

pub fn format_percent(p: f64) -> String {
    format!("{p:.1}")
}

/// Document frequencies of one slice.
pub fn term_table(stats: &[TermStats]) -> Table {
    let mut t = Table::new(["year", "term", "doc_freq", "percent"]);
    for s in stats {
        t.push([s.year.to_string(), s.term.clone(), s.doc_freq.to_string(), format_percent(s.percent)]);
    }
    t
}

/// New words per source side by side. A `-` means the word is not new
/// (or below the threshold) in that source.
pub fn new_words_table(former: i32, later: i32, per_source: &[(Source, Vec<TermStats>)]) -> Table {
    let mut columns = vec!["former_year".to_string(), "later_year".to_string(), "term".to_string()];
    for (src, _) in per_source {
        columns.push(format!("{src}_percent"));
        columns.push(format!("{src}_doc_freq"));
    }
    let mut rows: Vec<(f64, String, Vec<String>)> = Vec::new();
    let terms: BTreeSet<&str> = per_source
        .iter()
        .flat_map(|(_, v)| v.iter().map(|s| s.term.as_str()))
        .collect();
    for term in terms {
        let mut best = 0.0f64;
        let mut row = vec![former.to_string(), later.to_string(), term.to_uppercase()];
        for (_, stats) in per_source {
            match stats.iter().find(|s| s.term == term) {
                Some(s) => {
                    best = best.max(s.percent);
                    row.push(format_percent(s.percent));
                    row.push(s.doc_freq.to_string());
                }
                None => {
                    row.push(NA.to_string());
                    row.push(NA.to_string());
                }
            }
        }
        rows.push((best, term.to_string(), row));
    }
    rows.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut t = Table::new(columns);
    for (_, _, row) in rows {
        t.push(row);
    }
    t
}

/// New co-word pairs per source side by side, written `A/B`.
pub fn new_cowords_table(former: i32, later: i32, per_source: &[(Source, Vec<NewCoWord>)]) -> Table {
    let mut columns = vec!["former_year".to_string(), "later_year".to_string(), "coword".to_string()];
    for (src, _) in per_source {
        columns.push(format!("{src}_percent"));
        columns.push(format!("{src}_co_doc_freq"));
        columns.push(format!("{src}_cosine"));
    }
    let pairs: BTreeSet<(&str, &str)> = per_source
        .iter()
        .flat_map(|(_, v)| v.iter().map(|n| (n.pair.term_a.as_str(), n.pair.term_b.as_str())))
        .collect();
    let mut rows: Vec<(f64, (&str, &str), Vec<String>)> = Vec::new();
    for key in pairs {
        let mut best = 0.0f64;
        let mut row = vec![
            former.to_string(),
            later.to_string(),
            format!("{}/{}", key.0.to_uppercase(), key.1.to_uppercase()),
        ];
        for (_, list) in per_source {
            match list.iter().find(|n| (n.pair.term_a.as_str(), n.pair.term_b.as_str()) == key) {
                Some(n) => {
                    best = best.max(n.percent);
                    row.push(format_percent(n.percent));
                    row.push(n.pair.co_doc_freq.to_string());
                    row.push(format!("{:.4}", n.pair.cosine));
                }
                None => row.extend([NA, NA, NA].map(String::from)),
            }
        }
        rows.push((best, key, row));
    }
    rows.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut t = Table::new(columns);
    for (_, _, row) in rows {
        t.push(row);
    }
    t
}

pub fn phrase_table(points: &[PhrasePoint]) -> Table {
    let mut t = Table::new(["year", "doc_freq", "papers", "percent"]);
    for p in points {
        t.push([
            p.year.to_string(),
            p.doc_freq.to_string(),
            p.total.to_string(),
            format!("{:.2}", p.percent),
        ]);
    }
    t
}

/// Two-column `(year, percent)` series for plotting.
pub fn phrase_series(points: &[PhrasePoint]) -> Table {
    let mut t = Table::new(["year", "percent"]);
    for p in points {
        t.push([p.year.to_string(), format!("{:.2}", p.percent)]);
    }
    t
}
