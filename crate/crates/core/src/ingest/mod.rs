//! Reading the two export formats, offline record linkage, and corpus
//! construction.

mod cache;
mod citation_index;
mod corpus;
mod linkage;
mod medline;

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

pub use cache::{read_cache, read_cache_file, write_cache, write_cache_file};
pub use citation_index::parse_citation_index_export;
pub use corpus::{build_corpus, BuildReport, Corpus, YearRange, YearSlice};
pub use linkage::{link_records, normalize_title, LinkStatus, Linkage};
pub use medline::parse_medline_export;

use crate::error::{Error, Result};
use crate::record::{BibRecord, Source};

/// A non-fatal problem found while parsing an export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseIssue {
    MissingField {
        record_id: String,
        field: &'static str,
        line: usize,
    },
    DuplicateId {
        record_id: String,
        line: usize,
    },
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseIssue::MissingField {
                record_id,
                field,
                line,
            } => write!(f, "line {line}: record {record_id} has no {field} field"),
            ParseIssue::DuplicateId { record_id, line } => {
                write!(f, "line {line}: duplicate record id {record_id}, record skipped")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub issues: Vec<ParseIssue>,
}

impl ParseReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Records of one export file plus the problems met while reading it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedExport {
    pub records: Vec<BibRecord>,
    pub report: ParseReport,
}

/// Opens `path` and parses it in the layout of `source`.
pub fn read_export(path: &Path, source: Source) -> Result<ParsedExport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let parsed = match source {
        Source::CitationIndex => parse_citation_index_export(reader),
        Source::Medline => parse_medline_export(reader),
    };
    parsed.map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Reads lines, strips `\r` and a leading BOM, and numbers them from 1.
pub(crate) fn numbered_lines<R: std::io::BufRead>(
    input: R,
) -> impl Iterator<Item = Result<(usize, String)>> {
    input.lines().enumerate().map(|(i, line)| {
        let mut line = line.map_err(|e| Error::io("<input>", e))?;
        if line.ends_with('\r') {
            line.pop();
        }
        if i == 0 {
            if let Some(stripped) = line.strip_prefix('\u{feff}') {
                line = stripped.to_string();
            }
        }
        Ok((i + 1, line))
    })
}

/// Leading four-digit year of a date-like field value.
pub(crate) fn leading_year(value: &str) -> Option<i32> {
    let v = value.trim_start();
    let digits = v.get(..4)?;
    if digits.bytes().all(|b| b.is_ascii_digit()) && !v[4..].starts_with(|c: char| c.is_ascii_digit()) {
        digits.parse().ok()
    } else {
        None
    }
}
