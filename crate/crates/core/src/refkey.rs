//! Cited-reference identity.
//!
//! Citation-index exports write each cited reference as a comma-separated
//! string such as `BALTIMORE D, 1970, NATURE, V226, P1209`. [`RefKey`] keeps
//! the normalized components of such a string; two keys are equal when the
//! component tuples are equal, whatever the spacing or case of the original.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
struct Components {
    author: String,
    year: Option<i32>,
    source_abbrev: Option<String>,
    volume: Option<u32>,
    first_page: Option<u32>,
}

/// Normalized identity of one cited reference.
#[derive(Debug, Clone)]
pub struct RefKey {
    parts: Components,
    canonical: String,
    raw: String,
}

/// Uppercases and collapses every run of whitespace to one space.
pub fn normalize_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_uppercase));
    }
    out
}

fn tagged_number(segment: &str, tag: char) -> Option<u32> {
    let rest = segment.strip_prefix(tag)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn year_segment(segment: &str) -> Option<i32> {
    if segment.len() == 4 && segment.bytes().all(|b| b.is_ascii_digit()) {
        segment.parse().ok()
    } else {
        None
    }
}

/// Parses one cited-reference string. Never fails.
///
/// Segments are read positionally: author, year, source. Any later (or
/// misplaced) segment of the form `V<digits>` or `P<digits>` sets the volume
/// or first page. Anything else survives only in [`RefKey::raw`]. A string
/// with no recognizable component beyond the first segment becomes a key
/// whose author is the whole normalized string.
pub fn parse_cited_ref(raw: &str) -> RefKey {
    let mut segments: Vec<String> = raw.split(',').map(normalize_text).collect();
    while segments.len() > 1 && segments.last().is_some_and(|s| s.is_empty()) {
        segments.pop();
    }

    let mut parts = Components {
        author: segments.first().cloned().unwrap_or_default(),
        ..Components::default()
    };
    for (i, seg) in segments.iter().enumerate().skip(1) {
        if seg.is_empty() {
            continue;
        }
        if let Some(v) = tagged_number(seg, 'V') {
            parts.volume.get_or_insert(v);
        } else if let Some(p) = tagged_number(seg, 'P') {
            parts.first_page.get_or_insert(p);
        } else if i == 1 {
            parts.year = year_segment(seg);
        } else if i == 2 {
            parts.source_abbrev = Some(seg.clone());
        }
    }

    if parts.year.is_none()
        && parts.source_abbrev.is_none()
        && parts.volume.is_none()
        && parts.first_page.is_none()
    {
        parts.author = segments.join(", ");
    }

    RefKey::from_parts(parts, raw.to_string())
}

impl RefKey {
    fn from_parts(parts: Components, raw: String) -> Self {
        let canonical = render(&parts);
        RefKey {
            parts,
            canonical,
            raw,
        }
    }

    pub fn author(&self) -> &str {
        &self.parts.author
    }

    pub fn year(&self) -> Option<i32> {
        self.parts.year
    }

    pub fn source_abbrev(&self) -> Option<&str> {
        self.parts.source_abbrev.as_deref()
    }

    pub fn volume(&self) -> Option<u32> {
        self.parts.volume
    }

    pub fn first_page(&self) -> Option<u32> {
        self.parts.first_page
    }

    /// The string as it appeared in the export.
    pub fn raw(&self) -> &str {
        &self.raw
    }

    /// Canonical rendering of the components, e.g. `TEMIN HM, 1970, NATURE, V226, P1211`.
    ///
    /// Parsing this string yields an equal key. All orderings of keys use it.
    pub fn normalized(&self) -> &str {
        &self.canonical
    }
}

fn render(p: &Components) -> String {
    let mut fields = vec![p.author.clone()];
    match (p.year, &p.source_abbrev) {
        (Some(y), Some(s)) => {
            fields.push(format!("{y:04}"));
            fields.push(s.clone());
        }
        (Some(y), None) => fields.push(format!("{y:04}")),
        (None, Some(s)) => {
            fields.push(String::new());
            fields.push(s.clone());
        }
        (None, None) => {}
    }
    if let Some(v) = p.volume {
        fields.push(format!("V{v}"));
    }
    if let Some(pg) = p.first_page {
        fields.push(format!("P{pg}"));
    }
    fields.join(", ")
}

impl PartialEq for RefKey {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for RefKey {}

impl Hash for RefKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parts.hash(state);
    }
}

impl PartialOrd for RefKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RefKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical
            .cmp(&other.canonical)
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl fmt::Display for RefKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}
