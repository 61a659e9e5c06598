//! Per-year citation and co-citation counts and core-reference sets.
//!
//! Counting is per citing paper: a record that lists the same reference
//! twice counts once. A reference is *core* in a year under thresholds
//! `c/k` when at least `c` papers cite it and at least `k` papers co-cite
//! it together with another reference that also reaches `c` citations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ingest::YearSlice;
use crate::refkey::RefKey;

/// Minimum citing-paper count and minimum co-citation count, written `15/11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThresholdPair {
    cite_min: u32,
    cocite_min: u32,
}

impl ThresholdPair {
    pub fn new(cite_min: u32, cocite_min: u32) -> Result<Self> {
        if cite_min == 0 || cocite_min == 0 {
            return Err(Error::InvalidArgument(format!(
                "thresholds must be at least 1, got {cite_min}/{cocite_min}"
            )));
        }
        Ok(ThresholdPair {
            cite_min,
            cocite_min,
        })
    }

    pub fn cite_min(&self) -> u32 {
        self.cite_min
    }

    pub fn cocite_min(&self) -> u32 {
        self.cocite_min
    }

    /// A co-citation count never exceeds either member's citation count, so
    /// a co-citation minimum above the citation minimum is suspicious.
    pub fn warning(&self) -> Option<String> {
        (self.cocite_min > self.cite_min).then(|| {
            format!(
                "threshold {self}: co-citation minimum exceeds citation minimum; \
                 the citation minimum is effectively {}",
                self.cocite_min
            )
        })
    }

    /// True when both components are at most those of `other`.
    pub fn is_looser_or_equal(&self, other: &ThresholdPair) -> bool {
        self.cite_min <= other.cite_min && self.cocite_min <= other.cocite_min
    }
}

impl fmt::Display for ThresholdPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.cite_min, self.cocite_min)
    }
}

impl FromStr for ThresholdPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("threshold pair must look like 15/11, got {s:?}"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        ThresholdPair::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    }
}

/// An unordered pair of distinct references, stored with `first < second`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefPair {
    first: RefKey,
    second: RefKey,
}

impl RefPair {
    /// `None` when both keys are equal.
    pub fn new(a: RefKey, b: RefKey) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(RefPair { first: a, second: b }),
            std::cmp::Ordering::Greater => Some(RefPair { first: b, second: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> &RefKey {
        &self.first
    }

    pub fn second(&self) -> &RefKey {
        &self.second
    }
}

/// Core references of one year under one threshold pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreRefSet {
    pub year: i32,
    pub thresholds: ThresholdPair,
    pub members: BTreeSet<RefKey>,
}

impl CoreRefSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Number of distinct papers in the slice citing each reference.
pub fn citation_counts(slice: &YearSlice) -> BTreeMap<RefKey, usize> {
    let mut counts = BTreeMap::new();
    for rec in &slice.records {
        for key in &rec.cited_refs {
            *counts.entry(key.clone()).or_insert(0) += 1;
        }
    }
    counts
}

/// Number of papers citing both members, for every pair of `candidates`
/// that is co-cited at least once.
pub fn cocitation_counts(slice: &YearSlice, candidates: &BTreeSet<RefKey>) -> BTreeMap<RefPair, usize> {
    let mut counts = BTreeMap::new();
    for rec in &slice.records {
        let present: Vec<&RefKey> = rec.cited_refs.intersection(candidates).collect();
        for (i, a) in present.iter().enumerate() {
            for b in &present[i + 1..] {
                // BTreeSet iteration is ascending, so (a, b) is already ordered.
                let pair = RefPair {
                    first: (*a).clone(),
                    second: (*b).clone(),
                };
                *counts.entry(pair).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Co-citation count of a single pair, in either argument order.
pub fn cocitation_of(slice: &YearSlice, a: &RefKey, b: &RefKey) -> usize {
    if a == b {
        return 0;
    }
    slice
        .records
        .iter()
        .filter(|r| r.cited_refs.contains(a) && r.cited_refs.contains(b))
        .count()
}

/// Core references of `slice` under `t`.
pub fn core_references(slice: &YearSlice, t: ThresholdPair) -> CoreRefSet {
    let cite_min = t.cite_min as usize;
    let cocite_min = t.cocite_min as usize;

    let qualifying: Vec<RefKey> = citation_counts(slice)
        .into_iter()
        .filter(|&(_, n)| n >= cite_min)
        .map(|(k, _)| k)
        .collect();
    let index: HashMap<&RefKey, u32> = qualifying.iter().zip(0u32..).collect();

    let mut pair_counts: HashMap<(u32, u32), usize> = HashMap::new();
    let mut ids = Vec::new();
    for rec in &slice.records {
        ids.clear();
        ids.extend(rec.cited_refs.iter().filter_map(|k| index.get(k).copied()));
        ids.sort_unstable();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                *pair_counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }

    let mut is_member = vec![false; qualifying.len()];
    for (&(a, b), &n) in &pair_counts {
        if n >= cocite_min {
            is_member[a as usize] = true;
            is_member[b as usize] = true;
        }
    }

    let members = qualifying
        .into_iter()
        .zip(is_member)
        .filter_map(|(k, m)| m.then_some(k))
        .collect();
    CoreRefSet {
        year: slice.year,
        thresholds: t,
        members,
    }
}

/// Size of the union of all cited references in the slice.
pub fn distinct_ref_count(slice: &YearSlice) -> usize {
    slice
        .records
        .iter()
        .flat_map(|r| r.cited_refs.iter())
        .collect::<BTreeSet<_>>()
        .len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    Cited,
    Cocited,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ranked {
    Cited { key: RefKey, count: usize },
    Cocited { pair: RefPair, count: usize },
}

impl Ranked {
    pub fn count(&self) -> usize {
        match self {
            Ranked::Cited { count, .. } | Ranked::Cocited { count, .. } => *count,
        }
    }
}

/// The `k` most cited references (or most co-cited pairs), by descending
/// count with ties in ascending normalized order.
pub fn top_ranked(slice: &YearSlice, k: usize, mode: RankMode) -> Result<Vec<Ranked>> {
    if k == 0 {
        return Err(Error::InvalidArgument("ranking size must be at least 1".into()));
    }
    let mut ranked: Vec<Ranked> = match mode {
        RankMode::Cited => citation_counts(slice)
            .into_iter()
            .map(|(key, count)| Ranked::Cited { key, count })
            .collect(),
        RankMode::Cocited => {
            let all: BTreeSet<RefKey> = slice.records.iter().flat_map(|r| r.cited_refs.iter().cloned()).collect();
            cocitation_counts(slice, &all)
                .into_iter()
                .map(|(pair, count)| Ranked::Cocited { pair, count })
                .collect()
        }
    };
    // Map iteration is already ascending by key, so a stable sort on count
    // keeps the tie order.
    ranked.sort_by_key(|r| std::cmp::Reverse(r.count()));
    ranked.truncate(k);
    Ok(ranked)
}
