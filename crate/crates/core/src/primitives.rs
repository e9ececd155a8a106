//! The four primitive temporal algorithms: sort, count, time filtering and
//! duration filtering, plus interval merging.
//!
//! Everything here is generic over `F: Borrow<Fact>` so callers can work with
//! owned facts or with references straight out of [`Tkg::query`].
//!
//! [`Tkg::query`]: crate::tkg::Tkg::query

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::tkg::{Fact, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Start,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SortKey {
    pub endpoint: Endpoint,
    pub order: Order,
}

impl SortKey {
    pub const START_ASC: SortKey = SortKey {
        endpoint: Endpoint::Start,
        order: Order::Asc,
    };

    pub fn new(endpoint: Endpoint, order: Order) -> Self {
        Self { endpoint, order }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeFilter {
    AtPoint(i64),
    Overlaps(Interval),
    ContainedIn(Interval),
}

impl TimeFilter {
    pub fn accepts(&self, iv: &Interval) -> bool {
        match self {
            TimeFilter::AtPoint(t) => iv.contains_point(*t),
            TimeFilter::Overlaps(w) => iv.overlaps(w),
            TimeFilter::ContainedIn(w) => iv.contained_in(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Comparator {
    pub const ALL: [Comparator; 5] = [
        Comparator::Lt,
        Comparator::Le,
        Comparator::Eq,
        Comparator::Ge,
        Comparator::Gt,
    ];

    pub fn symbol(&self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Eq => "=",
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
        }
    }

    pub fn holds(&self, lhs: i64, rhs: i64) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown comparator `{0}`")]
pub struct UnknownComparator(pub String);

impl FromStr for Comparator {
    type Err = UnknownComparator;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "<" | "lt" => Comparator::Lt,
            "<=" | "≤" | "le" => Comparator::Le,
            "=" | "==" | "eq" => Comparator::Eq,
            ">=" | "≥" | "ge" => Comparator::Ge,
            ">" | "gt" => Comparator::Gt,
            other => return Err(UnknownComparator(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DurationPredicate {
    pub comparator: Comparator,
    pub threshold: i64,
}

impl DurationPredicate {
    pub fn new(comparator: Comparator, threshold: i64) -> Self {
        Self {
            comparator,
            threshold,
        }
    }

    pub fn accepts(&self, iv: &Interval) -> bool {
        self.comparator.holds(iv.duration(), self.threshold)
    }
}

// ---------------------------------------------------------------------------

/// Canonical total order on facts: `(t0, t1, s, r, o)`.
pub fn tie_break(a: &Fact, b: &Fact) -> Ordering {
    (a.start(), a.end())
        .cmp(&(b.start(), b.end()))
        .then_with(|| a.subject.as_str().cmp(b.subject.as_str()))
        .then_with(|| a.relation.as_str().cmp(b.relation.as_str()))
        .then_with(|| a.object.as_str().cmp(b.object.as_str()))
}

/// Comparator used by [`sort_facts`]. Descending order is the exact reverse
/// of ascending, tie-break included.
pub fn compare_by(key: SortKey, a: &Fact, b: &Fact) -> Ordering {
    let primary = match key.endpoint {
        Endpoint::Start => a.start().cmp(&b.start()),
        Endpoint::End => a.end().cmp(&b.end()),
    };
    let asc = primary.then_with(|| tie_break(a, b));
    match key.order {
        Order::Asc => asc,
        Order::Desc => asc.reverse(),
    }
}

pub fn sort_facts<F: Borrow<Fact> + Clone>(fs: &[F], key: SortKey) -> Vec<F> {
    let mut out = fs.to_vec();
    out.sort_by(|a, b| compare_by(key, a.borrow(), b.borrow()));
    out
}

pub fn filter_time<F: Borrow<Fact> + Clone>(fs: &[F], filter: TimeFilter) -> Vec<F> {
    fs.iter()
        .filter(|f| filter.accepts(&Borrow::<Fact>::borrow(*f).interval))
        .cloned()
        .collect()
}

pub fn count_facts<F>(fs: &[F]) -> usize {
    fs.len()
}

pub fn filter_duration<F: Borrow<Fact> + Clone>(fs: &[F], pred: DurationPredicate) -> Vec<F> {
    fs.iter()
        .filter(|f| pred.accepts(&Borrow::<Fact>::borrow(*f).interval))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedIntervals {
    pub disjoint: Vec<Interval>,
    pub total_length: i64,
}

/// Minimal sorted cover of the union of `ivs`. Intervals merge when they
/// overlap or share an endpoint (`next.start <= prev.end`).
pub fn merge_intervals(ivs: &[Interval]) -> MergedIntervals {
    let mut sorted = ivs.to_vec();
    sorted.sort();
    let mut disjoint: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match disjoint.last_mut() {
            Some(prev) if iv.start() <= prev.end() => {
                if iv.end() > prev.end() {
                    *prev = Interval::new(prev.start(), iv.end())
                        .expect("start <= end by construction");
                }
            }
            _ => disjoint.push(iv),
        }
    }
    let total_length = disjoint.iter().map(Interval::duration).sum();
    MergedIntervals {
        disjoint,
        total_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tkg::test_support::*;
    use crate::tkg::QueryPattern;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn sort_fixture() {
        let g = fixture_a();
        let f = g.facts();
        let input = vec![f[1].clone(), f[0].clone(), f[2].clone()];
        assert_eq!(sort_facts(&input, SortKey::START_ASC), f[..3].to_vec());
        assert!(sort_facts::<Fact>(&[], SortKey::START_ASC).is_empty());
    }

    #[test]
    fn descending_reverses_ties() {
        let a = fact("E1", "R1", "E2", 2000, 2005);
        let b = fact("E1", "R1", "E3", 2000, 2005);
        let desc = sort_facts(
            &[a.clone(), b.clone()],
            SortKey::new(Endpoint::Start, Order::Desc),
        );
        assert_eq!(desc, vec![b, a]);
    }

    #[test]
    fn filter_at_point_fixture() {
        let g = fixture_a();
        let p = QueryPattern::new(None, Some(rel("R1")), Some(ent("E2")));
        let got = filter_time(&g.query(&p), TimeFilter::AtPoint(2002));
        assert_eq!(got, vec![&g.facts()[0], &g.facts()[3]]);
    }

    #[test]
    fn duration_fixture() {
        let g = fixture_a();
        let e1r1 = g.query(&QueryPattern::new(Some(ent("E1")), Some(rel("R1")), None));
        let ge5 = filter_duration(&e1r1, DurationPredicate::new(Comparator::Ge, 5));
        assert_eq!(ge5, vec![&g.facts()[0], &g.facts()[2]]);
        let all: Vec<&Fact> = g.facts().iter().collect();
        assert_eq!(
            filter_duration(&all, DurationPredicate::new(Comparator::Ge, 0)),
            all
        );
        assert!(filter_duration(&e1r1, DurationPredicate::new(Comparator::Gt, 8)).is_empty());
        // F6 spans nine years, so the whole fixture keeps exactly that fact.
        assert_eq!(
            filter_duration(&all, DurationPredicate::new(Comparator::Gt, 8)),
            vec![&g.facts()[5]]
        );
        assert_eq!(count_facts(&all), 6);
    }

    #[test]
    fn merge_examples() {
        let m = merge_intervals(&[iv(2000, 2005), iv(2001, 2003), iv(2003, 2012)]);
        assert_eq!(m.disjoint, vec![iv(2000, 2012)]);
        assert_eq!(m.total_length, 12);
        let m = merge_intervals(&[iv(2000, 2005), iv(2006, 2010)]);
        assert_eq!(m.disjoint.len(), 2);
        assert_eq!(m.total_length, 9);
        assert_eq!(merge_intervals(&[]).total_length, 0);
        assert_eq!(
            merge_intervals(&[iv(2000, 2005), iv(2005, 2009)]).disjoint,
            vec![iv(2000, 2009)]
        );
        assert_eq!(
            merge_intervals(&[iv(2006, 2010), iv(2012, 2020)])
                .disjoint
                .len(),
            2
        );
    }

    #[test]
    fn comparator_parsing() {
        for c in Comparator::ALL {
            assert_eq!(c.symbol().parse::<Comparator>().unwrap(), c);
        }
        assert_eq!("≥".parse::<Comparator>().unwrap(), Comparator::Ge);
        assert!("~".parse::<Comparator>().is_err());
    }
}
