use std::collections::HashSet;
use std::io::BufRead;

use super::{leading_year, numbered_lines, ParseIssue, ParseReport, ParsedExport};
use crate::error::{Error, Result};
use crate::record::{BibRecord, Source};
use crate::refkey::parse_cited_ref;

const END_OF_RECORD: &str = "ER";
const CONTINUATION: &str = "   ";

/// File-level tags that live outside record blocks.
const FILE_TAGS: [&str; 3] = ["FN", "VR", "EF"];

#[derive(Default)]
struct Block {
    start_line: usize,
    fields: Vec<(String, Vec<String>)>,
}

impl Block {
    fn values<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.fields
            .iter()
            .filter(move |(t, _)| t == tag)
            .flat_map(|(_, v)| v.iter().map(String::as_str))
    }

    fn first_value(&self, tag: &str) -> Option<String> {
        let (_, lines) = self.fields.iter().find(|(t, _)| t == tag)?;
        let joined = lines
            .iter()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        Some(joined)
    }
}

fn field_tag(line: &str) -> Option<(&str, &str)> {
    let bytes = line.as_bytes();
    if bytes.len() < 2 || !bytes[..2].iter().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
        return None;
    }
    if !bytes[0].is_ascii_uppercase() {
        return None;
    }
    match bytes.get(2) {
        None => Some((&line[..2], "")),
        Some(b' ') => Some((&line[..2], &line[3..])),
        Some(_) => None,
    }
}

/// Parses a field-tagged citation-index export.
///
/// Each field starts at column 0 with a two-letter tag and a space;
/// continuation lines start with three spaces; a record ends with `ER` on
/// its own line. The record id comes from `UT`, the title from `TI`, the
/// year from `PY`, and cited references from `CR` (one per line, a trailing
/// `; ` is tolerated and several `; `-separated entries on one line are
/// split).
pub fn parse_citation_index_export<R: BufRead>(input: R) -> Result<ParsedExport> {
    let mut out = ParsedExport::default();
    let mut seen = HashSet::new();
    let mut block: Option<Block> = None;
    let mut ordinal = 0usize;

    for item in numbered_lines(input) {
        let (lineno, line) = item?;
        let trimmed_end = line.trim_end();

        match block.as_mut() {
            None => {
                if trimmed_end.is_empty() || line.starts_with(CONTINUATION) {
                    continue;
                }
                let Some((tag, value)) = field_tag(trimmed_end) else {
                    return Err(Error::MalformedRecord {
                        line: lineno,
                        reason: format!("expected a field tag, found {trimmed_end:?}"),
                    });
                };
                if FILE_TAGS.contains(&tag) || tag == END_OF_RECORD {
                    continue;
                }
                block = Some(Block {
                    start_line: lineno,
                    fields: vec![(tag.to_string(), vec![value.to_string()])],
                });
            }
            Some(b) => {
                if trimmed_end == END_OF_RECORD {
                    let finished = block.take().unwrap();
                    ordinal += 1;
                    finish_record(finished, ordinal, &mut seen, &mut out);
                } else if trimmed_end.is_empty() {
                    continue;
                } else if let Some(rest) = line.strip_prefix(CONTINUATION) {
                    if let Some((_, lines)) = b.fields.last_mut() {
                        lines.push(rest.to_string());
                    }
                } else if let Some((tag, value)) = field_tag(trimmed_end) {
                    if tag == "EF" {
                        return Err(unterminated(b.start_line));
                    }
                    b.fields.push((tag.to_string(), vec![value.to_string()]));
                } else {
                    return Err(Error::MalformedRecord {
                        line: b.start_line,
                        reason: format!("unrecognized line {lineno}: {trimmed_end:?}"),
                    });
                }
            }
        }
    }

    if let Some(b) = block {
        return Err(unterminated(b.start_line));
    }
    Ok(out)
}

fn unterminated(line: usize) -> Error {
    Error::MalformedRecord {
        line,
        reason: format!("no {END_OF_RECORD} terminator"),
    }
}

fn finish_record(block: Block, ordinal: usize, seen: &mut HashSet<String>, out: &mut ParsedExport) {
    let report: &mut ParseReport = &mut out.report;
    let line = block.start_line;

    let record_id = match block.first_value("UT").filter(|v| !v.is_empty()) {
        Some(id) => id,
        None => {
            let id = format!("record-{ordinal}");
            report.issues.push(ParseIssue::MissingField {
                record_id: id.clone(),
                field: "UT",
                line,
            });
            id
        }
    };
    if !seen.insert(record_id.clone()) {
        report.issues.push(ParseIssue::DuplicateId { record_id, line });
        return;
    }

    let title = block.first_value("TI").unwrap_or_default();
    if title.is_empty() {
        report.issues.push(ParseIssue::MissingField {
            record_id: record_id.clone(),
            field: "TI",
            line,
        });
    }

    let pub_year = block.first_value("PY").as_deref().and_then(leading_year);
    if pub_year.is_none() {
        report.issues.push(ParseIssue::MissingField {
            record_id: record_id.clone(),
            field: "PY",
            line,
        });
    }

    let mut record = BibRecord::new(record_id, Source::CitationIndex, title, pub_year);
    record.cited_refs = block
        .values("CR")
        .flat_map(|l| l.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_cited_ref)
        .collect();
    out.records.push(record);
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = "FN Export File\nVR 1.0\nPT J\nAU Temin, HM\nTI RNA-dependent DNA polymerase in virions\n   of Rous sarcoma virus\nCR BALTIMORE D, 1970, NATURE, V226, P1209\n   BALTIMORE D, 1970, NATURE, V226, P1209\n   TEMIN HM, 1964, NAT CANC I MONOGR, V17, P557; \nPY 1970\nUT WOS:A1970G000001\nER\n\nEF\n";

    #[test]
    fn parses_fields_and_collapses_duplicate_refs() {
        let parsed = parse_citation_index_export(ONE.as_bytes()).unwrap();
        assert!(parsed.report.is_empty(), "{:?}", parsed.report);
        let r = &parsed.records[0];
        assert_eq!(r.record_id, "WOS:A1970G000001");
        assert_eq!(r.title, "RNA-dependent DNA polymerase in virions of Rous sarcoma virus");
        assert_eq!(r.pub_year, Some(1970));
        assert_eq!(r.cited_refs.len(), 2);
    }

    #[test]
    fn semicolon_separated_refs_on_one_line() {
        let text = "PT J\nTI X\nCR A B, 1970, NATURE, V1, P2; C D, 1969, CELL, V3, P4\nPY 1971\nUT 1\nER\n";
        let parsed = parse_citation_index_export(text.as_bytes()).unwrap();
        assert_eq!(parsed.records[0].cited_refs.len(), 2);
    }

    #[test]
    fn empty_stream() {
        let parsed = parse_citation_index_export("".as_bytes()).unwrap();
        assert!(parsed.records.is_empty());
        assert!(parsed.report.is_empty());
    }

    #[test]
    fn missing_terminator_is_malformed() {
        let text = "FN x\nPT J\nTI A\nPY 1970\nUT 1\nER\nPT J\nTI B\nPY 1971\n";
        match parse_citation_index_export(text.as_bytes()) {
            Err(Error::MalformedRecord { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
        let text = "PT J\nTI B\nPY 1971\nEF\n";
        assert!(matches!(
            parse_citation_index_export(text.as_bytes()),
            Err(Error::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn missing_title_and_year_are_reported_not_dropped() {
        let text = "PT J\nUT 9\nER\n";
        let parsed = parse_citation_index_export(text.as_bytes()).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].pub_year, None);
        let fields: Vec<_> = parsed
            .report
            .issues
            .iter()
            .map(|i| match i {
                ParseIssue::MissingField { field, .. } => *field,
                _ => "",
            })
            .collect();
        assert_eq!(fields, ["TI", "PY"]);
    }

    #[test]
    fn missing_ut_gets_ordinal_id_and_duplicates_are_skipped() {
        let text = "PT J\nTI A\nPY 1970\nER\nPT J\nTI B\nPY 1970\nUT X\nER\nPT J\nTI C\nPY 1970\nUT X\nER\n";
        let parsed = parse_citation_index_export(text.as_bytes()).unwrap();
        let ids: Vec<_> = parsed.records.iter().map(|r| r.record_id.as_str()).collect();
        assert_eq!(ids, ["record-1", "X"]);
        assert!(parsed
            .report
            .issues
            .contains(&ParseIssue::DuplicateId { record_id: "X".into(), line: 10 }));
    }

    #[test]
    fn crlf_input() {
        let text = ONE.replace('\n', "\r\n");
        let a = parse_citation_index_export(text.as_bytes()).unwrap();
        let b = parse_citation_index_export(ONE.as_bytes()).unwrap();
        assert_eq!(a, b);
    }
}
