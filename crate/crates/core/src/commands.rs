//! Command implementations behind the `paradigm-shift` binary.
//!
//! Each command reads its inputs, writes its TSV files into the output
//! directory and returns the written paths plus any warnings. Settings come
//! from an optional TOML config file, overridden field by field by
//! command-line flags.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Deserialize;

use crate::citation_graph::{core_references, top_ranked, CoreRefSet, RankMode, Ranked, ThresholdPair};
use crate::ingest::{self, build_corpus, link_records, BuildReport, Corpus, ParsedExport, YearRange};
use crate::record::{BibRecord, Source};
use crate::report::{self, Table};
use crate::stability::{core_sets, groove_detect, series_from_cores, RsiSeries};
use crate::text::{self, StopWordList, DEFAULT_MIN_COSINE, DEFAULT_MIN_PERCENT};

pub const DEFAULT_CACHE: &str = "corpus_cache.tsv";
pub const DEFAULT_OUT_DIR: &str = "reports";
pub const DEFAULT_THRESHOLDS: &str = "15/11,15/8,11/9,10/8";
pub const DEFAULT_GAPS: &str = "1,2";

/// One layer of settings. Command-line flags and the config file both
/// produce a layer; flags win.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub index: Option<PathBuf>,
    pub medline: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub years: Option<String>,
    pub thresholds: Option<String>,
    pub gaps: Option<String>,
    pub min_percent: Option<f64>,
    pub min_cosine: Option<f64>,
    pub jobs: Option<usize>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            index: self.index.or(base.index),
            medline: self.medline.or(base.medline),
            stopwords: self.stopwords.or(base.stopwords),
            cache: self.cache.or(base.cache),
            out_dir: self.out_dir.or(base.out_dir),
            years: self.years.or(base.years),
            thresholds: self.thresholds.or(base.thresholds),
            gaps: self.gaps.or(base.gaps),
            min_percent: self.min_percent.or(base.min_percent),
            min_cosine: self.min_cosine.or(base.min_cosine),
            jobs: self.jobs.or(base.jobs),
        }
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub index: Option<PathBuf>,
    pub medline: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub cache: PathBuf,
    pub out_dir: PathBuf,
    pub years: Option<YearRange>,
    pub thresholds: Vec<ThresholdPair>,
    pub gaps: Vec<u32>,
    pub min_percent: f64,
    pub min_cosine: f64,
    pub jobs: Option<usize>,
}

fn parse_list<T>(s: &str, what: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse)
        .collect::<Result<_>>()
        .with_context(|| format!("invalid {what} list {s:?}"))?;
    if items.is_empty() {
        bail!("{what} list is empty");
    }
    Ok(items)
}

impl RunConfig {
    pub fn resolve(layer: ConfigLayer) -> Result<Self> {
        let thresholds = parse_list(
            layer.thresholds.as_deref().unwrap_or(DEFAULT_THRESHOLDS),
            "threshold",
            |p| Ok(p.parse::<ThresholdPair>()?),
        )?;
        let gaps = parse_list(layer.gaps.as_deref().unwrap_or(DEFAULT_GAPS), "gap", |p| {
            let g: u32 = p.parse().map_err(|_| anyhow!("gap {p:?} is not a positive integer"))?;
            if g == 0 {
                bail!("gap must be at least 1");
            }
            Ok(g)
        })?;
        let years = layer.years.as_deref().map(str::parse::<YearRange>).transpose()?;
        let min_percent = layer.min_percent.unwrap_or(DEFAULT_MIN_PERCENT);
        if min_percent.is_nan() || min_percent < 0.0 {
            bail!("--min-percent must be non-negative, got {min_percent}");
        }
        let min_cosine = layer.min_cosine.unwrap_or(DEFAULT_MIN_COSINE);
        if !(0.0..=1.0).contains(&min_cosine) {
            bail!("--min-cosine must lie in [0, 1], got {min_cosine}");
        }
        if layer.jobs == Some(0) {
            bail!("--jobs must be at least 1");
        }
        Ok(RunConfig {
            index: layer.index,
            medline: layer.medline,
            stopwords: layer.stopwords,
            cache: layer.cache.unwrap_or_else(|| DEFAULT_CACHE.into()),
            out_dir: layer.out_dir.unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
            years,
            thresholds,
            gaps,
            min_percent,
            min_cosine,
            jobs: layer.jobs,
        })
    }

    /// Settings echoed into the first line of every output file. The
    /// worker count is left out: it must not change any output byte.
    fn meta(&self, command: &str) -> Vec<(String, String)> {
        let list = |v: Vec<String>| v.join(",");
        let mut m = vec![
            ("command".to_string(), command.to_string()),
            ("cache".to_string(), self.cache.display().to_string()),
            (
                "years".to_string(),
                self.years.map_or_else(|| "all".to_string(), |r| r.to_string()),
            ),
        ];
        match command {
            "rsi" | "core-refs" => {
                m.push((
                    "thresholds".into(),
                    list(self.thresholds.iter().map(ToString::to_string).collect()),
                ));
                if command == "rsi" {
                    m.push(("gaps".into(), list(self.gaps.iter().map(ToString::to_string).collect())));
                }
            }
            "words" | "cowords" | "phrase" => {
                m.push((
                    "stopwords".into(),
                    self.stopwords
                        .as_ref()
                        .map_or_else(|| "builtin:english".to_string(), |p| p.display().to_string()),
                ));
                if command != "phrase" {
                    m.push(("min_percent".into(), self.min_percent.to_string()));
                }
                if command == "cowords" {
                    m.push(("min_cosine".into(), self.min_cosine.to_string()));
                }
            }
            _ => {}
        }
        m
    }

    fn stop_words(&self) -> Result<StopWordList> {
        match &self.stopwords {
            Some(p) => Ok(StopWordList::load(p)?),
            None => Ok(StopWordList::english()),
        }
    }

    /// Runs `f` on a pool with `jobs` workers, or the global pool.
    pub fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
                Ok(pool.install(f))
            }
        }
    }
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    fn write(&mut self, cfg: &RunConfig, name: &str, table: &Table) -> Result<()> {
        fs::create_dir_all(&cfg.out_dir)
            .with_context(|| format!("creating output directory {}", cfg.out_dir.display()))?;
        let path = cfg.out_dir.join(name);
        fs::write(&path, table.render()).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path);
        Ok(())
    }
}

fn read_source(path: &Path, source: Source) -> Result<ParsedExport> {
    if !path.exists() {
        bail!("input file {} does not exist", path.display());
    }
    ingest::read_export(path, source).with_context(|| format!("parsing {}", path.display()))
}

fn build_report_meta(report: &BuildReport) -> Vec<(String, String)> {
    vec![
        ("records_read".into(), report.input.to_string()),
        ("records_kept".into(), report.kept.to_string()),
        ("missing_year".into(), report.missing_year.to_string()),
        ("out_of_range".into(), report.out_of_range.to_string()),
    ]
}

/// Parses the exports, writes the corpus cache, and reports counts per
/// year, parse warnings and (with both exports) linkage coverage.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<CommandOutput> {
    if cfg.index.is_none() && cfg.medline.is_none() {
        bail!("ingest needs at least one input: --index and/or --medline");
    }
    let (index, medline) = cfg.run(|| {
        rayon::join(
            || cfg.index.as_deref().map(|p| read_source(p, Source::CitationIndex)).transpose(),
            || cfg.medline.as_deref().map(|p| read_source(p, Source::Medline)).transpose(),
        )
    })?;
    let (index, medline) = (index?, medline?);

    let mut out = CommandOutput::default();
    let mut warnings = Table::new(["source", "file", "line", "issue"]).with_meta(&cfg.meta("ingest"));
    for (src, path, parsed) in [
        (Source::CitationIndex, &cfg.index, &index),
        (Source::Medline, &cfg.medline, &medline),
    ] {
        let (Some(path), Some(parsed)) = (path, parsed) else { continue };
        for issue in &parsed.report.issues {
            let line = match issue {
                ingest::ParseIssue::MissingField { line, .. } | ingest::ParseIssue::DuplicateId { line, .. } => *line,
            };
            out.warnings.push(format!("{}: {issue}", path.display()));
            warnings.push([src.to_string(), path.display().to_string(), line.to_string(), issue.to_string()]);
        }
    }

    let linkage = match (&medline, &index) {
        (Some(m), Some(i)) => Some(link_records(&m.records, &i.records)),
        _ => None,
    };

    let records: Vec<BibRecord> = index
        .into_iter()
        .chain(medline)
        .flat_map(|p| p.records)
        .collect();
    ingest::write_cache_file(&records, &cfg.cache)
        .with_context(|| format!("writing cache {}", cfg.cache.display()))?;
    out.files.push(cfg.cache.clone());

    let (corpus, build) = build_corpus(records, cfg.years)?;
    let coverage = match &linkage {
        None => "not applicable".to_string(),
        Some(l) => l.coverage().map_or_else(|| report::NA.to_string(), |c| format!("{c:.4}")),
    };
    let summary = report::corpus_summary(&corpus)
        .with_meta(&cfg.meta("ingest"))
        .with_meta(&build_report_meta(&build))
        .meta("linkage_coverage", coverage);
    out.write(cfg, "ingest_summary.tsv", &summary)?;
    out.write(cfg, "ingest_warnings.tsv", &warnings)?;
    if let Some(l) = &linkage {
        out.write(cfg, "linkage.tsv", &report::linkage_table(l).with_meta(&cfg.meta("ingest")))?;
    }
    Ok(out)
}

/// Loads the cache and builds the corpus over the configured years.
pub fn load_corpus(cfg: &RunConfig) -> Result<(Corpus, BuildReport)> {
    if !cfg.cache.exists() {
        bail!(
            "corpus cache {} not found; run `paradigm-shift ingest` first",
            cfg.cache.display()
        );
    }
    let records = ingest::read_cache_file(&cfg.cache)?;
    Ok(build_corpus(records, cfg.years)?)
}

pub fn cmd_summary(cfg: &RunConfig) -> Result<CommandOutput> {
    let (corpus, build) = load_corpus(cfg)?;
    let mut out = CommandOutput::default();
    let table = report::corpus_summary(&corpus)
        .with_meta(&cfg.meta("summary"))
        .with_meta(&build_report_meta(&build));
    out.write(cfg, "summary.tsv", &table)?;
    Ok(out)
}

fn citation_corpus(cfg: &RunConfig, out: &mut CommandOutput) -> Result<Corpus> {
    let (corpus, _) = load_corpus(cfg)?;
    if !corpus.has_source(Source::CitationIndex) {
        out.warnings
            .push("the corpus holds no citation-index records; every core set is empty".into());
    }
    for t in &cfg.thresholds {
        out.warnings.extend(t.warning());
    }
    Ok(corpus.restrict(Source::CitationIndex))
}

fn threshold_tag(t: &ThresholdPair) -> String {
    format!("{}-{}", t.cite_min(), t.cocite_min())
}

/// Per-(threshold, gap) RSI tables, one matrix and one groove report per gap.
pub fn cmd_rsi(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::default();
    let corpus = citation_corpus(cfg, &mut out)?;
    let meta = cfg.meta("rsi");

    let cores: Vec<Vec<CoreRefSet>> = cfg.run(|| cfg.thresholds.par_iter().map(|&t| core_sets(&corpus, t)).collect())?;

    for &gap in &cfg.gaps {
        let series: Vec<RsiSeries> = cores
            .iter()
            .map(|c| series_from_cores(c, gap))
            .collect::<crate::Result<_>>()
            .with_context(|| format!("RSI series with gap {gap}"))?;
        for s in &series {
            let name = format!("rsi_{}_gap{gap}.tsv", threshold_tag(&s.thresholds));
            out.write(cfg, &name, &report::rsi_table(s).with_meta(&meta))?;
        }
        out.write(cfg, &format!("rsi_matrix_gap{gap}.tsv"), &report::rsi_matrix(&series).with_meta(&meta))?;
        match groove_detect(&series) {
            Ok(g) => out.write(cfg, &format!("groove_gap{gap}.tsv"), &report::groove_table(&g).with_meta(&meta))?,
            Err(e) => out.warnings.push(format!("groove detection for gap {gap} skipped: {e}")),
        }
    }
    Ok(out)
}

/// Core sets per threshold and year, top-ranked references and pairs per
/// year, and optionally the core references two years share.
pub fn cmd_core_refs(cfg: &RunConfig, top: usize, compare: Option<(i32, i32)>) -> Result<CommandOutput> {
    let mut out = CommandOutput::default();
    let corpus = citation_corpus(cfg, &mut out)?;
    let meta = cfg.meta("core-refs");

    let cores: Vec<CoreRefSet> = cfg.run(|| {
        cfg.thresholds
            .par_iter()
            .flat_map_iter(|&t| corpus.slices().map(move |s| core_references(s, t)))
            .collect()
    })?;
    out.write(cfg, "core_refs.tsv", &report::core_set_table(&cores).with_meta(&meta))?;

    let slices: Vec<_> = corpus.slices().collect();
    let ranked: Vec<(i32, Vec<Ranked>, Vec<Ranked>)> = cfg.run(|| {
        slices
            .par_iter()
            .map(|s| -> crate::Result<_> {
                Ok((s.year, top_ranked(s, top, RankMode::Cited)?, top_ranked(s, top, RankMode::Cocited)?))
            })
            .collect::<crate::Result<_>>()
    })??;
    let mut cited = Table::new(Vec::<String>::new());
    let mut cocited = Table::new(Vec::<String>::new());
    for (year, c, cc) in &ranked {
        let t = report::citation_table(*year, c);
        let tt = report::cocitation_table(*year, cc);
        if cited.columns().is_empty() {
            cited = Table::new(t.columns().to_vec()).with_meta(&meta).meta("top", top);
            cocited = Table::new(tt.columns().to_vec()).with_meta(&meta).meta("top", top);
        }
        for row in t.rows() {
            cited.push(row.clone());
        }
        for row in tt.rows() {
            cocited.push(row.clone());
        }
    }
    out.write(cfg, "top_cited.tsv", &cited)?;
    out.write(cfg, "top_cocited.tsv", &cocited)?;

    if let Some((a, b)) = compare {
        let range = corpus.year_range();
        if !range.contains(a) || !range.contains(b) {
            bail!("cannot compare {a}/{b}: available years are {range}");
        }
        let shared: Vec<_> = cfg
            .thresholds
            .iter()
            .map(|&t| {
                let pick = |y: i32| cores.iter().find(|c| c.year == y && c.thresholds == t).expect("core set");
                let common: BTreeSet<_> = pick(a).members.intersection(&pick(b).members).cloned().collect();
                (t, common)
            })
            .collect();
        out.write(
            cfg,
            &format!("shared_core_{a}_{b}.tsv"),
            &report::shared_core_table(a, b, &shared).with_meta(&meta),
        )?;
    }
    Ok(out)
}

/// Parses `1969:1971,1970:1972` into year pairs.
pub fn parse_year_pairs(s: &str) -> Result<Vec<(i32, i32)>> {
    parse_list(s, "year pair", |p| {
        let (a, b) = p
            .split_once(':')
            .ok_or_else(|| anyhow!("year pair must look like 1969:1971, got {p:?}"))?;
        let (a, b): (i32, i32) = (a.trim().parse()?, b.trim().parse()?);
        if a >= b {
            bail!("former year {a} must precede later year {b}");
        }
        Ok((a, b))
    })
}

fn sources_present(corpus: &Corpus) -> Vec<Source> {
    Source::ALL.into_iter().filter(|&s| corpus.has_source(s)).collect()
}

fn check_pairs(corpus: &Corpus, pairs: &[(i32, i32)]) -> Result<()> {
    let available: Vec<i32> = corpus.slices().filter(|s| !s.is_empty()).map(|s| s.year).collect();
    for &(a, b) in pairs {
        if !available.contains(&a) || !available.contains(&b) {
            let list: Vec<String> = available.iter().map(ToString::to_string).collect();
            bail!("unknown year pair {a}:{b}; available years: {}", list.join(", "));
        }
    }
    Ok(())
}

/// New title words per year pair, one percent column per source.
pub fn cmd_words(cfg: &RunConfig, pairs: &[(i32, i32)]) -> Result<CommandOutput> {
    let (corpus, _) = load_corpus(cfg)?;
    check_pairs(&corpus, pairs)?;
    let stop = cfg.stop_words()?;
    let sources = sources_present(&corpus);
    let meta = cfg.meta("words");

    let tables: Vec<(String, Table)> = cfg.run(|| {
        pairs
            .par_iter()
            .map(|&(a, b)| {
                let per_source: Vec<_> = sources
                    .iter()
                    .map(|&src| {
                        let former = corpus.slice(a).expect("checked").restrict(src);
                        let later = corpus.slice(b).expect("checked").restrict(src);
                        (src, text::new_terms(&former, &later, &stop, cfg.min_percent))
                    })
                    .collect();
                (
                    format!("new_words_{a}_{b}.tsv"),
                    report::new_words_table(a, b, &per_source).with_meta(&meta),
                )
            })
            .collect()
    })?;
    let mut out = CommandOutput::default();
    for (name, t) in &tables {
        out.write(cfg, name, t)?;
    }
    Ok(out)
}

/// New title co-word pairs per year pair, one percent column per source.
pub fn cmd_cowords(cfg: &RunConfig, pairs: &[(i32, i32)]) -> Result<CommandOutput> {
    let (corpus, _) = load_corpus(cfg)?;
    check_pairs(&corpus, pairs)?;
    let stop = cfg.stop_words()?;
    let sources = sources_present(&corpus);
    let meta = cfg.meta("cowords");

    let tables: Vec<(String, Table)> = cfg.run(|| {
        pairs
            .par_iter()
            .map(|&(a, b)| {
                let per_source: Vec<_> = sources
                    .iter()
                    .map(|&src| {
                        let former = corpus.slice(a).expect("checked").restrict(src);
                        let later = corpus.slice(b).expect("checked").restrict(src);
                        (
                            src,
                            text::new_coword_pairs(&former, &later, &stop, cfg.min_cosine, cfg.min_percent),
                        )
                    })
                    .collect();
                (
                    format!("new_cowords_{a}_{b}.tsv"),
                    report::new_cowords_table(a, b, &per_source).with_meta(&meta),
                )
            })
            .collect()
    })?;
    let mut out = CommandOutput::default();
    for (name, t) in &tables {
        out.write(cfg, name, t)?;
    }
    Ok(out)
}

/// Yearly frequency of `head` followed by a word starting with `stem`.
pub fn cmd_phrase(cfg: &RunConfig, head: &str, stem: &str) -> Result<CommandOutput> {
    if head.trim().is_empty() || stem.trim().is_empty() {
        bail!("--head and --stem must be non-empty");
    }
    let (corpus, _) = load_corpus(cfg)?;
    let mut out = CommandOutput::default();
    for src in sources_present(&corpus) {
        let points = text::phrase_trend(&corpus.restrict(src), head, stem);
        let tag = src.as_str().to_lowercase();
        let meta = cfg.meta("phrase");
        out.write(
            cfg,
            &format!("phrase_{tag}.tsv"),
            &report::phrase_table(&points)
                .with_meta(&meta)
                .meta("source", src)
                .meta("head", head)
                .meta("stem", stem),
        )?;
        out.write(
            cfg,
            &format!("phrase_series_{tag}.tsv"),
            &report::phrase_series(&points)
                .with_meta(&meta)
                .meta("source", src)
                .meta("head", head)
                .meta("stem", stem),
        )?;
    }
    Ok(out)
}
