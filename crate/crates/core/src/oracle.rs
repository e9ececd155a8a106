//! Brute-force reference implementation of the 17 solvers.
//!
//! Shares no logic with [`crate::funcset`] or [`crate::primitives`]: facts
//! are scanned linearly, ordering uses its own selection sort, durations of
//! unions are measured by counting covered unit segments, gaps by walking the
//! window point by point, and relation sequences by exhaustive search over
//! fact assignments. It is slow on purpose and only meant for verification.

use crate::answer::AnswerValue;
use crate::funcset::{
    Comparison, Direction, DurationMode, FuncError, TimeEndpoint, Triplet, TypedCall, Which,
};
use crate::primitives::{Comparator, Endpoint};
use crate::tkg::{EntityId, Fact, Interval, QueryPattern, RelationId, Tkg};

/// Widest time span the oracle is willing to enumerate.
pub const MAX_SPAN: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("time span {0} is too wide to enumerate")]
    SpanTooLarge(i64),
}

pub fn evaluate(g: &Tkg, call: &TypedCall) -> Result<AnswerValue, OracleError> {
    let facts = g.facts();
    match call {
        TypedCall::Timeline { pattern } => {
            let ms = nonempty(ordered(select(facts, pattern)))?;
            Ok(AnswerValue::EntityList(
                ms.iter().map(|f| wild(pattern, f)).collect(),
            ))
        }
        TypedCall::BeforeAfter {
            pattern,
            pivot,
            direction,
        } => {
            let ms = nonempty(ordered(select(facts, pattern)))?;
            let mut pivot_at = None;
            for (i, f) in ms.iter().enumerate() {
                if wild(pattern, f) == *pivot {
                    pivot_at = Some(i);
                    break;
                }
            }
            let i = pivot_at.ok_or(FuncError::NoMatchingFacts)?;
            let j = match direction {
                Direction::Before if i > 0 => i - 1,
                Direction::After if i + 1 < ms.len() => i + 1,
                _ => return Err(FuncError::NoMatchingFacts.into()),
            };
            Ok(AnswerValue::Entity(wild(pattern, ms[j])))
        }
        TypedCall::EventAtTimeT { pattern, time } => {
            Ok(AnswerValue::EntityList(holding_at(facts, pattern, *time)?))
        }
        TypedCall::EventAtWhatTime {
            triplet,
            endpoint,
            occurrence,
        } => {
            let f = pick_episode(facts, triplet, *occurrence)?;
            Ok(match endpoint {
                TimeEndpoint::Start => AnswerValue::TimePoint(f.interval.start()),
                TimeEndpoint::End => AnswerValue::TimePoint(f.interval.end()),
                TimeEndpoint::Interval => AnswerValue::TimeInterval(f.interval),
            })
        }
        TypedCall::FirstLast { pattern, which } => {
            let ms = nonempty(select(facts, pattern))?;
            // Scan for the extreme under the canonical order instead of sorting.
            let mut best = ms[0];
            for f in &ms[1..] {
                let wins = match which {
                    Which::First => key(f) < key(best),
                    Which::Last => key(f) > key(best),
                };
                if wins {
                    best = f;
                }
            }
            Ok(AnswerValue::Entity(wild(pattern, best)))
        }
        TypedCall::EventAtTheTimeOfAnotherEvent {
            anchor,
            anchor_point,
            pattern,
        } => {
            let a = single_episode(facts, anchor)?;
            let t = match anchor_point {
                Endpoint::Start => a.interval.start(),
                Endpoint::End => a.interval.end(),
            };
            Ok(AnswerValue::EntityList(holding_at(facts, pattern, t)?))
        }
        TypedCall::NumberOfEventsInTimeInterval { pattern, window } => {
            let ms = nonempty(select(facts, pattern))?;
            let n = ms
                .iter()
                .filter(|f| {
                    window.start() <= f.interval.start() && f.interval.end() <= window.end()
                })
                .count();
            Ok(AnswerValue::Count(n as i64))
        }
        TypedCall::RelationDuration {
            triplet,
            occurrence,
        } => {
            let f = pick_episode(facts, triplet, *occurrence)?;
            Ok(AnswerValue::Duration(f.interval.end() - f.interval.start()))
        }
        TypedCall::GetEntityByDuration { pattern, mode } => {
            let ms = nonempty(ordered(select(facts, pattern)))?;
            let len = |f: &Fact| f.interval.end() - f.interval.start();
            let target = match mode {
                DurationMode::Longest => ms.iter().map(|f| len(f)).max(),
                DurationMode::Shortest => ms.iter().map(|f| len(f)).min(),
            }
            .expect("non-empty");
            let f = ms
                .iter()
                .find(|f| len(f) == target)
                .expect("extremum is attained");
            Ok(AnswerValue::Entity(wild(pattern, f)))
        }
        TypedCall::FindEntitiesDuringTriplet { anchor, pattern } => {
            let a = single_episode(facts, anchor)?;
            let ms = nonempty(ordered(select(facts, pattern)))?;
            let mut out: Vec<EntityId> = Vec::new();
            for f in ms {
                if f == a {
                    continue;
                }
                let overlaps = f.interval.start() <= a.interval.end()
                    && a.interval.start() <= f.interval.end();
                let e = wild(pattern, f);
                if overlaps && !out.contains(&e) {
                    out.push(e);
                }
            }
            Ok(AnswerValue::EntityList(out))
        }
        TypedCall::GetEntitiesInBetween { pattern, from, to } => {
            let ms = nonempty(ordered(select(facts, pattern)))?;
            let earliest = |e: &EntityId| {
                ms.iter()
                    .filter(|f| wild(pattern, f) == *e)
                    .map(|f| f.interval.start())
                    .min()
                    .ok_or(FuncError::NoMatchingFacts)
            };
            let lo = earliest(from)?;
            let hi = earliest(to)?;
            Ok(AnswerValue::EntityList(
                ms.iter()
                    .filter(|f| f.interval.start() > lo && f.interval.start() < hi)
                    .map(|f| wild(pattern, f))
                    .collect(),
            ))
        }
        TypedCall::CalculateTotalRelationTime {
            pattern,
            simple_sum,
        } => {
            let ms = nonempty(select(facts, pattern))?;
            let total = if *simple_sum {
                ms.iter()
                    .map(|f| f.interval.end() - f.interval.start())
                    .sum()
            } else {
                measure(&ms)?
            };
            Ok(AnswerValue::Duration(total))
        }
        TypedCall::IsTripletWithinTimespan { triplet, window } => {
            let ms = nonempty(select(facts, &triplet.pattern()))?;
            Ok(AnswerValue::Boolean(ms.iter().any(|f| {
                window.start() <= f.interval.start() && f.interval.end() <= window.end()
            })))
        }
        TypedCall::CheckIntervalWithoutRelation {
            pattern,
            window,
            min_gap,
        } => {
            let ms = select(facts, pattern);
            Ok(AnswerValue::Boolean(longest_gap(&ms, *window)? > *min_gap))
        }
        TypedCall::CompareTripletDurations {
            first,
            second,
            comparison,
        } => {
            let a = measure(&nonempty(select(facts, &first.pattern()))?)?;
            let b = measure(&nonempty(select(facts, &second.pattern()))?)?;
            Ok(AnswerValue::Boolean(match comparison {
                Comparison::Longer => a > b,
                Comparison::Shorter => a < b,
            }))
        }
        TypedCall::SequenceOfRelationsInInterval {
            subject,
            sequence,
            window,
        } => {
            if sequence.is_empty() {
                return Ok(AnswerValue::Boolean(true));
            }
            let ms = nonempty(select(
                facts,
                &QueryPattern::new(subject.clone(), None, None),
            ))?;
            Ok(AnswerValue::Boolean(assignment_exists(
                &ms,
                sequence,
                *window,
                0,
                i64::MIN,
            )))
        }
        TypedCall::CountRelationsWithDuration {
            pattern,
            predicate,
            window,
        } => {
            let ms = nonempty(select(facts, pattern))?;
            let n = ms
                .iter()
                .filter(|f| {
                    f.interval.start() <= window.end() && window.start() <= f.interval.end()
                })
                .filter(|f| {
                    holds(
                        predicate.comparator,
                        f.interval.end() - f.interval.start(),
                        predicate.threshold,
                    )
                })
                .count();
            Ok(AnswerValue::Count(n as i64))
        }
    }
}

// ---------------------------------------------------------------------------

fn select<'g>(facts: &'g [Fact], p: &QueryPattern) -> Vec<&'g Fact> {
    let mut out = Vec::new();
    for f in facts {
        let s_ok = match &p.subject {
            Some(s) => f.subject == *s,
            None => true,
        };
        let r_ok = match &p.relation {
            Some(r) => f.relation == *r,
            None => true,
        };
        let o_ok = match &p.object {
            Some(o) => f.object == *o,
            None => true,
        };
        if s_ok && r_ok && o_ok {
            out.push(f);
        }
    }
    out
}

fn nonempty<T>(v: Vec<T>) -> Result<Vec<T>, FuncError> {
    if v.is_empty() {
        Err(FuncError::NoMatchingFacts)
    } else {
        Ok(v)
    }
}

fn key(f: &Fact) -> (i64, i64, &str, &str, &str) {
    (
        f.interval.start(),
        f.interval.end(),
        f.subject.as_str(),
        f.relation.as_str(),
        f.object.as_str(),
    )
}

/// Selection sort by `(t0, t1, s, r, o)`.
fn ordered(mut v: Vec<&Fact>) -> Vec<&Fact> {
    for i in 0..v.len() {
        let mut m = i;
        for j in i + 1..v.len() {
            if key(v[j]) < key(v[m]) {
                m = j;
            }
        }
        v.swap(i, m);
    }
    v
}

fn wild(p: &QueryPattern, f: &Fact) -> EntityId {
    match (&p.subject, &p.object) {
        (None, _) => f.subject.clone(),
        _ => f.object.clone(),
    }
}

fn holding_at(facts: &[Fact], p: &QueryPattern, t: i64) -> Result<Vec<EntityId>, FuncError> {
    let ms = nonempty(ordered(select(facts, p)))?;
    let mut out: Vec<EntityId> = Vec::new();
    for f in ms {
        let e = wild(p, f);
        if f.interval.start() <= t && t <= f.interval.end() && !out.contains(&e) {
            out.push(e);
        }
    }
    Ok(out)
}

fn single_episode<'g>(facts: &'g [Fact], t: &Triplet) -> Result<&'g Fact, FuncError> {
    let ms = nonempty(select(facts, &t.pattern()))?;
    if ms.len() != 1 {
        return Err(FuncError::AmbiguousEpisode { count: ms.len() });
    }
    Ok(ms[0])
}

fn pick_episode<'g>(
    facts: &'g [Fact],
    t: &Triplet,
    occurrence: Option<usize>,
) -> Result<&'g Fact, FuncError> {
    let ms = nonempty(ordered(select(facts, &t.pattern())))?;
    match occurrence {
        None if ms.len() == 1 => Ok(ms[0]),
        None => Err(FuncError::AmbiguousEpisode { count: ms.len() }),
        Some(k) if k >= 1 && k <= ms.len() => Ok(ms[k - 1]),
        Some(k) => Err(FuncError::OccurrenceOutOfRange {
            requested: k,
            available: ms.len(),
        }),
    }
}

fn holds(c: Comparator, lhs: i64, rhs: i64) -> bool {
    match c {
        Comparator::Lt => lhs < rhs,
        Comparator::Le => lhs <= rhs,
        Comparator::Eq => lhs == rhs,
        Comparator::Ge => lhs >= rhs,
        Comparator::Gt => lhs > rhs,
    }
}

fn check_span(lo: i64, hi: i64) -> Result<(), OracleError> {
    let span = hi.saturating_sub(lo);
    if span > MAX_SPAN {
        return Err(OracleError::SpanTooLarge(span));
    }
    Ok(())
}

/// Measure of the union of the facts' closed intervals: the number of unit
/// segments `[y, y+1]` lying inside at least one interval.
fn measure(fs: &[&Fact]) -> Result<i64, OracleError> {
    let lo = fs.iter().map(|f| f.interval.start()).min().unwrap_or(0);
    let hi = fs.iter().map(|f| f.interval.end()).max().unwrap_or(0);
    check_span(lo, hi)?;
    let mut covered = 0;
    for y in lo..hi {
        if fs
            .iter()
            .any(|f| f.interval.start() <= y && y < f.interval.end())
        {
            covered += 1;
        }
    }
    Ok(covered)
}

/// Longest run of uncovered time inside `window`, counted in unit segments.
///
/// The window is walked as alternating elements: point `y`, open segment
/// `(y, y+1)`, point `y+1`, ... A covered point or segment ends a run; the
/// run's length is the number of open segments in it.
fn longest_gap(fs: &[&Fact], window: Interval) -> Result<i64, OracleError> {
    check_span(window.start(), window.end())?;
    let point_covered = |y: i64| {
        fs.iter()
            .any(|f| f.interval.start() <= y && y <= f.interval.end())
    };
    let segment_covered = |y: i64| {
        fs.iter()
            .any(|f| f.interval.start() <= y && y < f.interval.end())
    };
    let mut best = 0;
    let mut run = 0;
    let mut y = window.start();
    loop {
        if point_covered(y) {
            run = 0;
        }
        if y == window.end() {
            break;
        }
        if segment_covered(y) {
            run = 0;
        } else {
            run += 1;
            best = best.max(run);
        }
        y += 1;
    }
    Ok(best)
}

fn assignment_exists(
    fs: &[&Fact],
    sequence: &[(RelationId, Endpoint)],
    window: Interval,
    step: usize,
    prev: i64,
) -> bool {
    let Some((rel, ep)) = sequence.get(step) else {
        return true;
    };
    fs.iter().any(|f| {
        if f.relation != *rel {
            return false;
        }
        let t = match ep {
            Endpoint::Start => f.interval.start(),
            Endpoint::End => f.interval.end(),
        };
        t >= prev
            && window.start() <= t
            && t <= window.end()
            && assignment_exists(fs, sequence, window, step + 1, t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tkg::test_support::*;

    #[test]
    fn gap_walk_handles_point_facts() {
        let g = Tkg::build([
            fact("E1", "R1", "E2", 2000, 2005),
            fact("E1", "R1", "E3", 2007, 2007),
        ])
        .unwrap();
        let ms: Vec<&Fact> = g.facts().iter().collect();
        assert_eq!(
            longest_gap(&ms, Interval::new(2000, 2010).unwrap()).unwrap(),
            3
        );
        assert_eq!(
            longest_gap(&[], Interval::new(2000, 2010).unwrap()).unwrap(),
            10
        );
    }

    #[test]
    fn measure_counts_union() {
        let g = fixture_a();
        let ms: Vec<&Fact> = g.facts()[..3].iter().collect();
        assert_eq!(measure(&ms).unwrap(), 17);
    }
}
