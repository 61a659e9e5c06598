use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::refkey::RefKey;

/// Which export a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    /// Field-tagged citation-index export; carries cited references.
    CitationIndex,
    /// MEDLINE export; never carries cited references.
    Medline,
}

impl Source {
    pub const ALL: [Source; 2] = [Source::Medline, Source::CitationIndex];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::CitationIndex => "CITATION_INDEX",
            Source::Medline => "MEDLINE",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "CITATION_INDEX" => Ok(Source::CitationIndex),
            "MEDLINE" => Ok(Source::Medline),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

/// One bibliographic record.
///
/// `pub_year` is optional at parse time; records without a year are dropped
/// (and counted) when a [`Corpus`](crate::ingest::Corpus) is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BibRecord {
    pub record_id: String,
    pub source: Source,
    pub title: String,
    pub pub_year: Option<i32>,
    pub cited_refs: BTreeSet<RefKey>,
}

impl BibRecord {
    pub fn new(record_id: impl Into<String>, source: Source, title: impl Into<String>, pub_year: Option<i32>) -> Self {
        BibRecord {
            record_id: record_id.into(),
            source,
            title: title.into(),
            pub_year,
            cited_refs: BTreeSet::new(),
        }
    }

    /// Builder-style helper used mostly by tests and fixtures.
    pub fn with_refs<I, S>(mut self, refs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.cited_refs
            .extend(refs.into_iter().map(|r| crate::refkey::parse_cited_ref(r.as_ref())));
        self
    }
}
