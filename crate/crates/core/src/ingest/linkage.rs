use std::collections::HashMap;

use crate::record::BibRecord;

/// Case-folds, turns punctuation into spaces, and collapses whitespace.
pub fn normalize_title(title: &str) -> String {
    let mapped: String = title
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    mapped.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkStatus {
    Matched(String),
    Unmatched,
    /// More than one index record shares the normalized title and year.
    Ambiguous(Vec<String>),
}

/// MEDLINE record id to citation-index record id, in MEDLINE input order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Linkage {
    pub entries: Vec<(String, LinkStatus)>,
}

impl Linkage {
    pub fn matched(&self) -> usize {
        self.count(|s| matches!(s, LinkStatus::Matched(_)))
    }

    pub fn ambiguous(&self) -> usize {
        self.count(|s| matches!(s, LinkStatus::Ambiguous(_)))
    }

    pub fn unmatched(&self) -> usize {
        self.count(|s| matches!(s, LinkStatus::Unmatched))
    }

    fn count(&self, pred: impl Fn(&LinkStatus) -> bool) -> usize {
        self.entries.iter().filter(|(_, s)| pred(s)).count()
    }

    /// Matched / total MEDLINE records; `None` when there are none.
    pub fn coverage(&self) -> Option<f64> {
        if self.entries.is_empty() {
            None
        } else {
            Some(self.matched() as f64 / self.entries.len() as f64)
        }
    }

    pub fn status(&self, medline_id: &str) -> Option<&LinkStatus> {
        self.entries
            .iter()
            .find(|(id, _)| id == medline_id)
            .map(|(_, s)| s)
    }
}

/// Links MEDLINE records to citation-index records with equal normalized
/// title and equal publication year. Records without a year or with a
/// title that normalizes to nothing stay unmatched.
pub fn link_records(medline: &[BibRecord], index: &[BibRecord]) -> Linkage {
    let mut by_key: HashMap<(String, i32), Vec<&str>> = HashMap::new();
    for rec in index {
        let Some(year) = rec.pub_year else { continue };
        let title = normalize_title(&rec.title);
        if title.is_empty() {
            continue;
        }
        by_key.entry((title, year)).or_default().push(&rec.record_id);
    }

    let entries = medline
        .iter()
        .map(|m| {
            let status = match m.pub_year {
                None => LinkStatus::Unmatched,
                Some(year) => match by_key.get(&(normalize_title(&m.title), year)) {
                    None => LinkStatus::Unmatched,
                    Some(ids) if ids.len() == 1 => LinkStatus::Matched(ids[0].to_string()),
                    Some(ids) => {
                        let mut ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
                        ids.sort();
                        LinkStatus::Ambiguous(ids)
                    }
                },
            };
            (m.record_id.clone(), status)
        })
        .collect();
    Linkage { entries }
}
