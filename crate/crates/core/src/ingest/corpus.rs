use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::record::{BibRecord, Source};

/// Inclusive range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YearRange {
    pub min: i32,
    pub max: i32,
}

impl YearRange {
    pub fn new(min: i32, max: i32) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidArgument(format!("empty year range {min}:{max}")));
        }
        Ok(YearRange { min, max })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.min..=self.max).contains(&year)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + Clone {
        self.min..=self.max
    }

    pub fn len(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for YearRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("year range must look like 1966:1975, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let min = a.trim().parse().map_err(|_| bad())?;
        let max = b.trim().parse().map_err(|_| bad())?;
        YearRange::new(min, max)
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

/// The records of one publication year.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearSlice {
    pub year: i32,
    pub records: Vec<BibRecord>,
}

impl YearSlice {
    pub fn new(year: i32, records: Vec<BibRecord>) -> Self {
        debug_assert!(records.iter().all(|r| r.pub_year == Some(year)));
        YearSlice { year, records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count_source(&self, source: Source) -> usize {
        self.records.iter().filter(|r| r.source == source).count()
    }

    pub fn restrict(&self, source: Source) -> YearSlice {
        YearSlice {
            year: self.year,
            records: self
                .records
                .iter()
                .filter(|r| r.source == source)
                .cloned()
                .collect(),
        }
    }
}

/// Counts from [`build_corpus`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub input: usize,
    pub kept: usize,
    pub missing_year: usize,
    pub out_of_range: usize,
}

/// Records partitioned by publication year. Every year of `year_range`
/// has a slice, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    year_range: YearRange,
    slices: BTreeMap<i32, YearSlice>,
}

/// Partitions `records` by year. Records without a year, or outside
/// `year_range`, are dropped and counted. Without an explicit range the
/// span of the surviving years is used.
pub fn build_corpus(
    records: impl IntoIterator<Item = BibRecord>,
    year_range: Option<YearRange>,
) -> Result<(Corpus, BuildReport)> {
    let mut report = BuildReport::default();
    let mut by_year: BTreeMap<i32, Vec<BibRecord>> = BTreeMap::new();
    for rec in records {
        report.input += 1;
        let Some(year) = rec.pub_year else {
            report.missing_year += 1;
            continue;
        };
        if year_range.is_some_and(|r| !r.contains(year)) {
            report.out_of_range += 1;
            continue;
        }
        by_year.entry(year).or_default().push(rec);
    }
    report.kept = report.input - report.missing_year - report.out_of_range;

    let range = match (year_range, by_year.keys().next(), by_year.keys().next_back()) {
        (_, None, _) | (_, _, None) => {
            let (min, max) = year_range.map_or((0, 0), |r| (r.min, r.max));
            return Err(Error::EmptyCorpus { min, max });
        }
        (Some(r), _, _) => r,
        (None, Some(&min), Some(&max)) => YearRange { min, max },
    };

    let slices = range
        .years()
        .map(|y| (y, YearSlice::new(y, by_year.remove(&y).unwrap_or_default())))
        .collect();
    Ok((
        Corpus {
            year_range: range,
            slices,
        },
        report,
    ))
}

impl Corpus {
    pub fn year_range(&self) -> YearRange {
        self.year_range
    }

    pub fn slice(&self, year: i32) -> Option<&YearSlice> {
        self.slices.get(&year)
    }

    pub fn slices(&self) -> impl Iterator<Item = &YearSlice> {
        self.slices.values()
    }

    pub fn len(&self) -> usize {
        self.slices.values().map(YearSlice::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A corpus with the same year range holding only `source` records.
    pub fn restrict(&self, source: Source) -> Corpus {
        Corpus {
            year_range: self.year_range,
            slices: self
                .slices
                .iter()
                .map(|(&y, s)| (y, s.restrict(source)))
                .collect(),
        }
    }

    pub fn has_source(&self, source: Source) -> bool {
        self.slices().any(|s| s.records.iter().any(|r| r.source == source))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(years: &[Option<i32>]) -> Vec<BibRecord> {
        years
            .iter()
            .enumerate()
            .map(|(i, &y)| BibRecord::new(format!("r{i}"), Source::CitationIndex, "t", y))
            .collect()
    }

    #[test]
    fn year_filter_counts_exclusions() {
        let years: Vec<_> = (1966..=1975).map(Some).collect();
        let (corpus, report) = build_corpus(recs(&years), Some("1969:1975".parse().unwrap())).unwrap();
        assert_eq!(report.out_of_range, 3);
        assert_eq!(report.kept, 7);
        assert_eq!(corpus.len(), 7);
        assert!(corpus.slice(1968).is_none());
        assert_eq!(corpus.slice(1969).unwrap().len(), 1);
    }

    #[test]
    fn partition_sums_to_total() {
        let years = [Some(1966), Some(1966), Some(1970), Some(1975), Some(1971), Some(1970)];
        let (corpus, report) = build_corpus(recs(&years), Some(YearRange::new(1966, 1975).unwrap())).unwrap();
        let sum: usize = corpus.slices().map(|s| s.len()).sum();
        assert_eq!(sum, report.kept);
        assert_eq!(sum, 6);
        assert_eq!(corpus.slices().count(), 10);
        for s in corpus.slices() {
            assert!(s.records.iter().all(|r| r.pub_year == Some(s.year)));
        }
    }

    #[test]
    fn single_year_gives_single_slice() {
        let (corpus, _) = build_corpus(recs(&[Some(1970), Some(1970)]), None).unwrap();
        assert_eq!(corpus.slices().count(), 1);
        assert_eq!(corpus.year_range(), YearRange { min: 1970, max: 1970 });
    }

    #[test]
    fn missing_year_counted_and_empty_corpus_errors() {
        let (_, report) = build_corpus(recs(&[None, Some(1970)]), None).unwrap();
        assert_eq!(report.missing_year, 1);
        assert!(matches!(build_corpus(recs(&[None]), None), Err(Error::EmptyCorpus { .. })));
        assert!(matches!(
            build_corpus(recs(&[Some(1950)]), Some(YearRange::new(1966, 1975).unwrap())),
            Err(Error::EmptyCorpus { min: 1966, max: 1975 })
        ));
    }

    #[test]
    fn range_parsing() {
        assert_eq!("1966:1975".parse::<YearRange>().unwrap(), YearRange { min: 1966, max: 1975 });
        assert!("1975:1966".parse::<YearRange>().is_err());
        assert!("1975".parse::<YearRange>().is_err());
    }
}
