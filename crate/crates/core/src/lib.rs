//! Paradigm-shift detection in a literature corpus.
//!
//! The pipeline reads citation-index and MEDLINE exports, partitions the
//! records by publication year, and then
//!
//! * determines each year's core references under citation/co-citation
//!   thresholds and compares them across years with the Reference
//!   Stability Index ([`stability`]), looking for a joint minimum (a
//!   citation "groove");
//! * follows title words: document frequencies, words and co-word pairs
//!   that are new relative to an earlier year, and the yearly frequency of
//!   a two-word phrase ([`text`]).
//!
//! All reports are plain TSV ([`report`]); [`commands`] wires everything
//! to the `paradigm-shift` command-line tool.

pub mod citation_graph;
pub mod commands;
pub mod error;
pub mod ingest;
pub mod record;
pub mod refkey;
pub mod report;
pub mod stability;
pub mod text;

pub use citation_graph::{
    citation_counts, cocitation_counts, core_references, distinct_ref_count, top_ranked, CoreRefSet, RankMode,
    Ranked, RefPair, ThresholdPair,
};
pub use error::{Error, Result};
pub use ingest::{build_corpus, Corpus, YearRange, YearSlice};
pub use record::{BibRecord, Source};
pub use refkey::{parse_cited_ref, RefKey};
pub use stability::{groove_detect, rsi, rsi_series, GrooveReport, Interval, RsiPoint, RsiSeries};
