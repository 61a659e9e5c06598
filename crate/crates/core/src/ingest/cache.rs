//! Line-delimited TSV cache of parsed records.
//!
//! ```text
//! #paradigm-shift corpus cache v1
//! record_id<TAB>source<TAB>year<TAB>title<TAB>cited_refs
//! WOS:1<TAB>CITATION_INDEX<TAB>1970<TAB>Some title<TAB>A B, 1970, X, V1, P2;C D, 1969, Y
//! ```
//!
//! `\`, tab, CR and LF are escaped as `\\`, `\t`, `\r`, `\n` in every
//! field. Cited references are their raw strings joined by `;`, with a
//! literal `;` escaped as `\;`. An empty year field means no year.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::record::BibRecord;
use crate::refkey::parse_cited_ref;

const MAGIC: &str = "#paradigm-shift corpus cache v1";
const HEADER: &str = "record_id\tsource\tyear\ttitle\tcited_refs";
const REF_SEPARATOR: char = ';';

fn escape_into(out: &mut String, s: &str, escape_separator: bool) {
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            REF_SEPARATOR if escape_separator => out.push_str("\\;"),
            c => out.push(c),
        }
    }
}

/// Unescapes `s`, splitting on unescaped `;` when `split` is set.
fn unescape(s: &str, split: bool, line: usize) -> Result<Vec<String>> {
    let mut parts = vec![String::new()];
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        let cur = parts.last_mut().unwrap();
        match c {
            '\\' => match chars.next() {
                Some('\\') => cur.push('\\'),
                Some('t') => cur.push('\t'),
                Some('n') => cur.push('\n'),
                Some('r') => cur.push('\r'),
                Some(';') => cur.push(';'),
                other => {
                    return Err(Error::Cache {
                        line,
                        reason: format!("invalid escape \\{}", other.map(String::from).unwrap_or_default()),
                    })
                }
            },
            REF_SEPARATOR if split => parts.push(String::new()),
            c => cur.push(c),
        }
    }
    Ok(parts)
}

pub fn write_cache<W: Write>(records: &[BibRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "{HEADER}")?;
    let mut line = String::new();
    for r in records {
        line.clear();
        escape_into(&mut line, &r.record_id, false);
        line.push('\t');
        line.push_str(r.source.as_str());
        line.push('\t');
        if let Some(y) = r.pub_year {
            line.push_str(&y.to_string());
        }
        line.push('\t');
        escape_into(&mut line, &r.title, false);
        line.push('\t');
        for (i, k) in r.cited_refs.iter().enumerate() {
            if i > 0 {
                line.push(REF_SEPARATOR);
            }
            escape_into(&mut line, k.raw(), true);
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

pub fn read_cache<R: BufRead>(input: R) -> Result<Vec<BibRecord>> {
    let mut lines = input.lines().enumerate();
    let mut next = |expected: &str| -> Result<()> {
        match lines.next() {
            Some((_, Ok(l))) if l == expected => Ok(()),
            Some((i, Ok(l))) => Err(Error::Cache {
                line: i + 1,
                reason: format!("expected {expected:?}, found {l:?}"),
            }),
            Some((_, Err(e))) => Err(Error::io("<cache>", e)),
            None => Err(Error::Cache {
                line: 0,
                reason: "truncated cache header".into(),
            }),
        }
    };
    next(MAGIC)?;
    next(HEADER)?;

    let mut records = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<cache>", e))?;
        let cols: Vec<&str> = line.split('\t').collect();
        let [id, source, year, title, refs] = cols[..] else {
            return Err(Error::Cache {
                line: lineno,
                reason: format!("expected 5 columns, found {}", cols.len()),
            });
        };
        let bad = |reason: String| Error::Cache { line: lineno, reason };
        let source = source.parse().map_err(bad)?;
        let pub_year = if year.is_empty() {
            None
        } else {
            Some(year.parse().map_err(|_| bad(format!("bad year {year:?}")))?)
        };
        let id = unescape(id, false, lineno)?.remove(0);
        let title = unescape(title, false, lineno)?.remove(0);
        let mut rec = BibRecord::new(id, source, title, pub_year);
        if !refs.is_empty() {
            rec.cited_refs = unescape(refs, true, lineno)?
                .iter()
                .map(|r| parse_cited_ref(r))
                .collect();
        }
        records.push(rec);
    }
    Ok(records)
}

pub fn write_cache_file(records: &[BibRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_cache(records, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn read_cache_file(path: &Path) -> Result<Vec<BibRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_cache(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}
