//! Reference Stability Index (RSI) between the core-reference sets of two
//! publication years, RSI series over a year range, and groove detection.
//!
//! RSI is the Jaccard ratio `shared / (n_former + n_later - shared)`. It is
//! undefined when either core set is empty.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::citation_graph::{core_references, CoreRefSet, ThresholdPair};
use crate::error::{Error, Result};
use crate::ingest::{Corpus, YearSlice};

/// Cell text for an undefined RSI.
pub const UNDEFINED_CELL: &str = "-/-";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub former: i32,
    pub later: i32,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.former, self.later)
    }
}

/// One comparison of two years' core sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsiPoint {
    pub former_year: i32,
    pub later_year: i32,
    pub n_former: usize,
    pub n_later: usize,
    pub shared: usize,
}

impl RsiPoint {
    /// Builds a point from counts; `None` if `shared` exceeds either set.
    pub fn from_counts(former_year: i32, later_year: i32, n_former: usize, n_later: usize, shared: usize) -> Option<Self> {
        (shared <= n_former.min(n_later)).then_some(RsiPoint {
            former_year,
            later_year,
            n_former,
            n_later,
            shared,
        })
    }

    pub fn interval(&self) -> Interval {
        Interval {
            former: self.former_year,
            later: self.later_year,
        }
    }

    /// Number of distinct core references over both years.
    pub fn union(&self) -> usize {
        self.n_former + self.n_later - self.shared
    }

    /// `(shared, union)`, or `None` when either core set is empty.
    pub fn ratio(&self) -> Option<(usize, usize)> {
        (self.n_former > 0 && self.n_later > 0).then(|| (self.shared, self.union()))
    }

    pub fn rsi(&self) -> Option<f64> {
        self.ratio().map(|(s, u)| s as f64 / u as f64)
    }

    /// RSI with two decimals, or `-/-` when undefined.
    pub fn rsi_2dp(&self) -> String {
        match self.ratio() {
            Some((s, u)) => round_2dp(s, u),
            None => UNDEFINED_CELL.to_string(),
        }
    }

    /// `sh/RSI` as in a stability table, e.g. `2/0.22`; `-/-` when undefined.
    pub fn cell(&self) -> String {
        match self.ratio() {
            Some((s, u)) => format!("{s}/{}", round_2dp(s, u)),
            None => UNDEFINED_CELL.to_string(),
        }
    }

    /// Exact comparison of two defined RSI values.
    fn cmp_rsi(&self, other: &RsiPoint) -> Option<Ordering> {
        let (a, b) = self.ratio()?;
        let (c, d) = other.ratio()?;
        Some((a as u128 * d as u128).cmp(&(c as u128 * b as u128)))
    }
}

/// Renders `num / den` with two decimals, ties to even.
///
/// Exact integer arithmetic: the quotient is never materialized as a float,
/// so `3/24 = 0.125` renders `0.12` and `1/8` is not perturbed by binary
/// representation.
pub fn round_2dp(num: usize, den: usize) -> String {
    assert!(den > 0, "denominator must be positive");
    let scaled = num as u128 * 100;
    let den = den as u128;
    let mut q = scaled / den;
    let twice_rem = 2 * (scaled % den);
    if twice_rem > den || (twice_rem == den && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:02}", q / 100, q % 100)
}

/// RSI of two core sets computed under the same thresholds.
pub fn rsi(former: &CoreRefSet, later: &CoreRefSet) -> Result<RsiPoint> {
    if former.thresholds != later.thresholds {
        return Err(Error::ThresholdMismatch {
            left: former.thresholds,
            right: later.thresholds,
        });
    }
    Ok(RsiPoint {
        former_year: former.year,
        later_year: later.year,
        n_former: former.len(),
        n_later: later.len(),
        shared: former.members.intersection(&later.members).count(),
    })
}

/// RSI points for every `(y, y + gap)` inside a year range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsiSeries {
    pub thresholds: ThresholdPair,
    pub gap: u32,
    pub points: Vec<RsiPoint>,
}

/// Core sets of every year in the corpus, in year order.
pub fn core_sets(corpus: &Corpus, t: ThresholdPair) -> Vec<CoreRefSet> {
    let slices: Vec<&YearSlice> = corpus.slices().collect();
    slices.par_iter().map(|s| core_references(s, t)).collect()
}

/// Builds a series from per-year core sets (consecutive years, ascending).
pub fn series_from_cores(cores: &[CoreRefSet], gap: u32) -> Result<RsiSeries> {
    let (Some(first), Some(last)) = (cores.first(), cores.last()) else {
        return Err(Error::InvalidArgument("no core sets".into()));
    };
    if gap == 0 {
        return Err(Error::InvalidArgument("gap must be at least 1".into()));
    }
    let g = gap as usize;
    if cores.len() <= g {
        return Err(Error::GapTooLarge {
            gap,
            min: first.year,
            max: last.year,
        });
    }
    let points = cores
        .iter()
        .zip(&cores[g..])
        .map(|(a, b)| rsi(a, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(RsiSeries {
        thresholds: first.thresholds,
        gap,
        points,
    })
}

/// RSI series of `corpus` under `t` with the given year gap (1 compares
/// consecutive years, 2 skips one year).
pub fn rsi_series(corpus: &Corpus, t: ThresholdPair, gap: u32) -> Result<RsiSeries> {
    let range = corpus.year_range();
    if gap as usize >= range.len() {
        return Err(Error::GapTooLarge {
            gap,
            min: range.min,
            max: range.max,
        });
    }
    series_from_cores(&core_sets(corpus, t), gap)
}

/// Minimal RSI of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMinimum {
    pub thresholds: ThresholdPair,
    /// The minimal points; more than one on ties.
    pub points: Vec<RsiPoint>,
}

impl SeriesMinimum {
    pub fn value(&self) -> f64 {
        self.points[0].rsi().expect("minimum points are defined")
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.points.iter().map(RsiPoint::interval).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrooveReport {
    pub gap: u32,
    pub minima: Vec<SeriesMinimum>,
    /// Intervals minimal in every series. Only filled when there are at
    /// least two series.
    pub consensus: Vec<Interval>,
}

impl GrooveReport {
    pub fn has_consensus(&self) -> bool {
        !self.consensus.is_empty()
    }
}

/// Finds the interval(s) of minimal defined RSI in each series and the
/// intervals on which all series agree.
pub fn groove_detect(series: &[RsiSeries]) -> Result<GrooveReport> {
    let Some(first) = series.first() else {
        return Err(Error::InvalidArgument("no RSI series given".into()));
    };
    let layout: Vec<Interval> = first.points.iter().map(RsiPoint::interval).collect();
    for s in series {
        let l: Vec<Interval> = s.points.iter().map(RsiPoint::interval).collect();
        if s.gap != first.gap || l != layout {
            return Err(Error::SeriesMismatch);
        }
    }

    let mut minima = Vec::with_capacity(series.len());
    for s in series {
        let mut best: Vec<RsiPoint> = Vec::new();
        for p in s.points.iter().filter(|p| p.ratio().is_some()) {
            match best.first().and_then(|b| p.cmp_rsi(b)) {
                None | Some(Ordering::Less) => best = vec![*p],
                Some(Ordering::Equal) => best.push(*p),
                Some(Ordering::Greater) => {}
            }
        }
        if best.is_empty() {
            return Err(Error::NoDefinedPoints {
                thresholds: s.thresholds,
                gap: s.gap,
            });
        }
        minima.push(SeriesMinimum {
            thresholds: s.thresholds,
            points: best,
        });
    }

    let consensus = if minima.len() < 2 {
        Vec::new()
    } else {
        let mut common: BTreeSet<Interval> = minima[0].intervals().into_iter().collect();
        for m in &minima[1..] {
            let these: BTreeSet<Interval> = m.intervals().into_iter().collect();
            common = common.intersection(&these).copied().collect();
        }
        common.into_iter().collect()
    };

    Ok(GrooveReport {
        gap: first.gap,
        minima,
        consensus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refkey::parse_cited_ref;
    use proptest::prelude::*;

    fn t(c: u32, k: u32) -> ThresholdPair {
        ThresholdPair::new(c, k).unwrap()
    }

    fn core(year: i32, thresholds: ThresholdPair, ids: impl IntoIterator<Item = u32>) -> CoreRefSet {
        CoreRefSet {
            year,
            thresholds,
            members: ids.into_iter().map(|i| parse_cited_ref(&format!("AUTHOR{i}, 1960, J, V{i}"))).collect(),
        }
    }

    fn point(n_f: usize, n_l: usize, sh: usize) -> RsiPoint {
        RsiPoint::from_counts(1970, 1971, n_f, n_l, sh).unwrap()
    }

    #[test]
    fn reported_values() {
        assert_eq!(point(8, 3, 2).rsi_2dp(), "0.22");
        assert_eq!(point(46, 80, 8).rsi_2dp(), "0.07");
        assert_eq!(point(25, 44, 18).rsi_2dp(), "0.35");
        assert_eq!(point(29, 72, 6).rsi_2dp(), "0.06");
        assert_eq!(point(8, 3, 2).cell(), "2/0.22");
    }

    #[test]
    fn rounding_ties_go_to_even() {
        assert_eq!(round_2dp(1, 8), "0.12");
        assert_eq!(round_2dp(3, 8), "0.38");
        assert_eq!(round_2dp(1, 1), "1.00");
        assert_eq!(round_2dp(0, 5), "0.00");
        assert_eq!(round_2dp(1, 3), "0.33");
        assert_eq!(round_2dp(2, 3), "0.67");
        assert_eq!(round_2dp(1, 200), "0.00");
        assert_eq!(round_2dp(3, 200), "0.02");
    }

    #[test]
    fn identical_disjoint_and_empty() {
        let a = core(1970, t(2, 1), [1, 2, 3]);
        let b = core(1971, t(2, 1), [1, 2, 3]);
        assert_eq!(rsi(&a, &b).unwrap().rsi_2dp(), "1.00");
        let c = core(1971, t(2, 1), [4, 5]);
        assert_eq!(rsi(&a, &c).unwrap().rsi_2dp(), "0.00");
        let empty = core(1969, t(2, 1), []);
        let p = rsi(&empty, &a).unwrap();
        assert_eq!(p.rsi(), None);
        assert_eq!(p.cell(), "-/-");
        assert_eq!(rsi(&a, &empty).unwrap().rsi_2dp(), "-/-");
    }

    #[test]
    fn mismatched_thresholds() {
        let a = core(1970, t(2, 1), [1]);
        let b = core(1971, t(3, 1), [1]);
        assert!(matches!(rsi(&a, &b), Err(Error::ThresholdMismatch { .. })));
    }

    fn cores_for(years: std::ops::RangeInclusive<i32>) -> Vec<CoreRefSet> {
        years.map(|y| core(y, t(1, 1), [1, (y % 7) as u32 + 2])).collect()
    }

    #[test]
    fn series_lengths() {
        let cores = cores_for(1966..=1975);
        let s2 = series_from_cores(&cores, 2).unwrap();
        assert_eq!(s2.points.len(), 8);
        assert_eq!(s2.points[0].interval(), Interval { former: 1966, later: 1968 });
        assert_eq!(s2.points[7].interval(), Interval { former: 1973, later: 1975 });
        assert_eq!(series_from_cores(&cores, 1).unwrap().points.len(), 9);
        assert!(matches!(
            series_from_cores(&cores_for(1970..=1970), 1),
            Err(Error::GapTooLarge { gap: 1, .. })
        ));
    }

    fn series(thresholds: ThresholdPair, cells: &[(usize, usize, usize)]) -> RsiSeries {
        RsiSeries {
            thresholds,
            gap: 2,
            points: cells
                .iter()
                .enumerate()
                .map(|(i, &(a, b, s))| RsiPoint::from_counts(1966 + i as i32, 1968 + i as i32, a, b, s).unwrap())
                .collect(),
        }
    }

    #[test]
    fn groove_ties_and_constant_series() {
        let s = series(t(1, 1), &[(4, 4, 2), (4, 4, 1), (4, 4, 3), (4, 4, 1)]);
        let r = groove_detect(std::slice::from_ref(&s)).unwrap();
        assert_eq!(
            r.minima[0].intervals(),
            vec![Interval { former: 1967, later: 1969 }, Interval { former: 1969, later: 1971 }]
        );
        assert!(!r.has_consensus());

        let flat = series(t(2, 1), &[(4, 4, 2); 4]);
        let r = groove_detect(std::slice::from_ref(&flat)).unwrap();
        assert_eq!(r.minima[0].points.len(), 4);
        let r = groove_detect(&[flat, s]).unwrap();
        assert_eq!(
            r.consensus,
            vec![Interval { former: 1967, later: 1969 }, Interval { former: 1969, later: 1971 }]
        );
    }

    #[test]
    fn groove_skips_undefined_and_errors_when_nothing_defined() {
        let s = series(t(1, 1), &[(0, 4, 0), (3, 4, 0), (4, 4, 1)]);
        let r = groove_detect(&[s]).unwrap();
        assert_eq!(r.minima[0].intervals(), vec![Interval { former: 1967, later: 1969 }]);
        let none = series(t(1, 1), &[(0, 4, 0), (4, 0, 0)]);
        assert!(matches!(groove_detect(&[none]), Err(Error::NoDefinedPoints { .. })));
    }

    #[test]
    fn groove_requires_matching_layout() {
        let a = series(t(1, 1), &[(4, 4, 2), (4, 4, 1)]);
        let b = series(t(2, 1), &[(4, 4, 2)]);
        assert!(matches!(groove_detect(&[a, b]), Err(Error::SeriesMismatch)));
    }

    fn sets() -> impl Strategy<Value = (BTreeSet<u32>, BTreeSet<u32>)> {
        (prop::collection::btree_set(0u32..30, 0..15), prop::collection::btree_set(0u32..30, 0..15))
    }

    proptest! {
        #[test]
        fn rsi_symmetric_and_bounded((a, b) in sets()) {
            let ca = core(1970, t(1, 1), a.clone());
            let cb = core(1972, t(1, 1), b.clone());
            let ab = rsi(&ca, &cb).unwrap();
            let ba = rsi(&cb, &ca).unwrap();
            prop_assert_eq!(ab.rsi(), ba.rsi());
            prop_assert!(ab.shared <= ab.n_former.min(ab.n_later));
            match ab.rsi() {
                None => prop_assert!(a.is_empty() || b.is_empty()),
                Some(v) => {
                    prop_assert!((0.0..=1.0).contains(&v));
                    prop_assert_eq!(v == 1.0, a == b);
                    prop_assert_eq!(v == 0.0, a.is_disjoint(&b));
                }
            }
        }

        #[test]
        fn adding_a_shared_reference_increases_rsi((a, b) in sets(), extra in 100u32..200) {
            prop_assume!(!a.is_empty() && !b.is_empty() && a != b);
            let before = rsi(&core(1970, t(1, 1), a.clone()), &core(1971, t(1, 1), b.clone())).unwrap();
            let mut a2 = a.clone();
            a2.insert(extra);
            let mut b2 = b.clone();
            b2.insert(extra);
            let after = rsi(&core(1970, t(1, 1), a2), &core(1971, t(1, 1), b2)).unwrap();
            prop_assert_eq!(after.cmp_rsi(&before), Some(Ordering::Greater));
        }

        #[test]
        fn rounding_matches_reference(num in 0usize..500, extra in 1usize..500) {
            let den = num + extra;
            let got = round_2dp(num, den);
            // Reference: compare exact remainders against one half.
            let exact = num as f64 * 100.0 / den as f64;
            let lo = exact.floor();
            let frac_twice = 2 * (num * 100 % den);
            let expected = if frac_twice > den || (frac_twice == den && (lo as u64) % 2 == 1) { lo + 1.0 } else { lo };
            prop_assert_eq!(got, format!("{:.2}", expected / 100.0));
        }
    }
}
