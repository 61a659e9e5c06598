use std::collections::HashSet;
use std::io::BufRead;

use super::{leading_year, numbered_lines, ParseIssue, ParsedExport};
use crate::error::{Error, Result};
use crate::record::{BibRecord, Source};

const CONTINUATION: &str = "      ";

struct Block {
    start_line: usize,
    fields: Vec<(String, String)>,
}

impl Block {
    fn value(&self, tag: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(t, _)| t == tag)
            .map(|(_, v)| v.as_str())
    }
}

/// `TAG - value`, with the tag left-aligned and space-padded to four columns.
fn tagged_line(line: &str) -> Option<(&str, &str)> {
    let head = line.get(..4)?;
    let rest = &line[4..];
    let first = head.chars().next()?;
    if !first.is_ascii_uppercase() {
        return None;
    }
    let tag = head.trim_end();
    if !tag.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
        return None;
    }
    let value = rest.strip_prefix('-')?;
    if value.is_empty() {
        return Some((tag, ""));
    }
    value.strip_prefix(' ').map(|v| (tag, v.trim_end()))
}

/// Parses a MEDLINE export: `TAG - value` lines, six-space continuation
/// lines, blank lines between records.
///
/// `PMID` gives the record id, `TI` the title (continuation lines joined
/// with single spaces), and `DP` the year (its leading four digits).
pub fn parse_medline_export<R: BufRead>(input: R) -> Result<ParsedExport> {
    let mut out = ParsedExport::default();
    let mut seen = HashSet::new();
    let mut block: Option<Block> = None;
    let mut ordinal = 0usize;

    for item in numbered_lines(input) {
        let (lineno, line) = item?;
        if line.trim().is_empty() {
            if let Some(b) = block.take() {
                ordinal += 1;
                finish_record(b, ordinal, &mut seen, &mut out);
            }
            continue;
        }

        if let Some(rest) = line.strip_prefix(CONTINUATION) {
            match block.as_mut().and_then(|b| b.fields.last_mut()) {
                Some((_, value)) => {
                    let rest = rest.trim();
                    if !rest.is_empty() {
                        if !value.is_empty() {
                            value.push(' ');
                        }
                        value.push_str(rest);
                    }
                }
                None => {
                    return Err(Error::MalformedRecord {
                        line: lineno,
                        reason: "continuation line outside a record".into(),
                    })
                }
            }
            continue;
        }

        let Some((tag, value)) = tagged_line(&line) else {
            return Err(Error::MalformedRecord {
                line: block.as_ref().map_or(lineno, |b| b.start_line),
                reason: format!("unrecognized line {lineno}: {:?}", line.trim_end()),
            });
        };
        block
            .get_or_insert_with(|| Block {
                start_line: lineno,
                fields: Vec::new(),
            })
            .fields
            .push((tag.to_string(), value.trim().to_string()));
    }

    if let Some(b) = block.take() {
        ordinal += 1;
        finish_record(b, ordinal, &mut seen, &mut out);
    }
    Ok(out)
}

fn finish_record(block: Block, ordinal: usize, seen: &mut HashSet<String>, out: &mut ParsedExport) {
    let line = block.start_line;
    let issues = &mut out.report.issues;

    let record_id = match block.value("PMID").filter(|v| !v.is_empty()) {
        Some(id) => id.to_string(),
        None => {
            let id = format!("record-{ordinal}");
            issues.push(ParseIssue::MissingField {
                record_id: id.clone(),
                field: "PMID",
                line,
            });
            id
        }
    };
    if !seen.insert(record_id.clone()) {
        issues.push(ParseIssue::DuplicateId { record_id, line });
        return;
    }

    let title = block.value("TI").unwrap_or_default().to_string();
    if title.is_empty() {
        issues.push(ParseIssue::MissingField {
            record_id: record_id.clone(),
            field: "TI",
            line,
        });
    }
    let pub_year = block.value("DP").and_then(leading_year);
    if pub_year.is_none() {
        issues.push(ParseIssue::MissingField {
            record_id: record_id.clone(),
            field: "DP",
            line,
        });
    }
    out.records
        .push(BibRecord::new(record_id, Source::Medline, title, pub_year));
}
