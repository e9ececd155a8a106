//! Solver logic for the 17 question types, composed from the primitives.

use std::collections::HashSet;

use super::call::{Comparison, Direction, DurationMode, TimeEndpoint, Triplet, Which};
use super::FuncError;
use crate::answer::AnswerValue;
use crate::primitives::{
    filter_duration, filter_time, merge_intervals, sort_facts, DurationPredicate, Endpoint,
    SortKey, TimeFilter,
};
use crate::tkg::{EntityId, Fact, Interval, QueryPattern, RelationId, Tkg};

/// Entity at the pattern's wildcard position. Callers guarantee exactly one
/// wildcard at subject or object.
fn slot_entity(p: &QueryPattern, f: &Fact) -> EntityId {
    if p.subject.is_none() {
        f.subject.clone()
    } else {
        f.object.clone()
    }
}

fn base<'g>(g: &'g Tkg, p: &QueryPattern) -> Result<Vec<&'g Fact>, FuncError> {
    let fs = g.query(p);
    if fs.is_empty() {
        return Err(FuncError::NoMatchingFacts);
    }
    Ok(fs)
}

fn sorted<'g>(g: &'g Tkg, p: &QueryPattern) -> Result<Vec<&'g Fact>, FuncError> {
    Ok(sort_facts(&base(g, p)?, SortKey::START_ASC))
}

fn dedup(es: impl IntoIterator<Item = EntityId>) -> Vec<EntityId> {
    let mut seen = HashSet::new();
    es.into_iter().filter(|e| seen.insert(e.clone())).collect()
}

/// The single episode of an anchor triplet.
fn unique_episode<'g>(g: &'g Tkg, t: &Triplet) -> Result<&'g Fact, FuncError> {
    let fs = base(g, &t.pattern())?;
    if fs.len() > 1 {
        return Err(FuncError::AmbiguousEpisode { count: fs.len() });
    }
    Ok(fs[0])
}

/// Episode chosen by a 1-based occurrence, or the unique one.
fn episode<'g>(g: &'g Tkg, t: &Triplet, occurrence: Option<usize>) -> Result<&'g Fact, FuncError> {
    let fs = sorted(g, &t.pattern())?;
    match occurrence {
        Some(k) => fs
            .get(k - 1)
            .copied()
            .ok_or(FuncError::OccurrenceOutOfRange {
                requested: k,
                available: fs.len(),
            }),
        None if fs.len() > 1 => Err(FuncError::AmbiguousEpisode { count: fs.len() }),
        None => Ok(fs[0]),
    }
}

fn endpoint_of(f: &Fact, e: Endpoint) -> i64 {
    match e {
        Endpoint::Start => f.start(),
        Endpoint::End => f.end(),
    }
}

// ---------------------------------------------------------------------------

pub fn timeline(g: &Tkg, p: &QueryPattern) -> Result<AnswerValue, FuncError> {
    let fs = sorted(g, p)?;
    Ok(AnswerValue::EntityList(
        fs.iter().map(|f| slot_entity(p, f)).collect(),
    ))
}

pub fn before_after(
    g: &Tkg,
    p: &QueryPattern,
    pivot: &EntityId,
    dir: Direction,
) -> Result<AnswerValue, FuncError> {
    let fs = sorted(g, p)?;
    let i = fs
        .iter()
        .position(|f| slot_entity(p, f) == *pivot)
        .ok_or(FuncError::NoMatchingFacts)?;
    let j = match dir {
        Direction::Before => i.checked_sub(1),
        Direction::After => Some(i + 1).filter(|j| *j < fs.len()),
    }
    .ok_or(FuncError::NoMatchingFacts)?;
    Ok(AnswerValue::Entity(slot_entity(p, fs[j])))
}

fn entities_at(g: &Tkg, p: &QueryPattern, t: i64) -> Result<Vec<EntityId>, FuncError> {
    let fs = sorted(g, p)?;
    let hits = filter_time(&fs, TimeFilter::AtPoint(t));
    Ok(dedup(hits.iter().map(|f| slot_entity(p, f))))
}

pub fn event_at_time_t(g: &Tkg, p: &QueryPattern, t: i64) -> Result<AnswerValue, FuncError> {
    Ok(AnswerValue::EntityList(entities_at(g, p, t)?))
}

pub fn event_at_what_time(
    g: &Tkg,
    t: &Triplet,
    endpoint: TimeEndpoint,
    occurrence: Option<usize>,
) -> Result<AnswerValue, FuncError> {
    let f = episode(g, t, occurrence)?;
    Ok(match endpoint {
        TimeEndpoint::Start => AnswerValue::TimePoint(f.start()),
        TimeEndpoint::End => AnswerValue::TimePoint(f.end()),
        TimeEndpoint::Interval => AnswerValue::TimeInterval(f.interval),
    })
}

pub fn first_last(g: &Tkg, p: &QueryPattern, which: Which) -> Result<AnswerValue, FuncError> {
    let fs = sorted(g, p)?;
    let f = match which {
        Which::First => fs[0],
        Which::Last => fs[fs.len() - 1],
    };
    Ok(AnswerValue::Entity(slot_entity(p, f)))
}

pub fn event_at_the_time_of_another_event(
    g: &Tkg,
    anchor: &Triplet,
    point: Endpoint,
    p: &QueryPattern,
) -> Result<AnswerValue, FuncError> {
    let a = unique_episode(g, anchor)?;
    Ok(AnswerValue::EntityList(entities_at(
        g,
        p,
        endpoint_of(a, point),
    )?))
}

pub fn number_of_events_in_time_interval(
    g: &Tkg,
    p: &QueryPattern,
    window: Interval,
) -> Result<AnswerValue, FuncError> {
    let fs = base(g, p)?;
    Ok(AnswerValue::Count(
        filter_time(&fs, TimeFilter::ContainedIn(window)).len() as i64,
    ))
}

pub fn relation_duration(
    g: &Tkg,
    t: &Triplet,
    occurrence: Option<usize>,
) -> Result<AnswerValue, FuncError> {
    Ok(AnswerValue::Duration(episode(g, t, occurrence)?.duration()))
}

pub fn get_entity_by_duration(
    g: &Tkg,
    p: &QueryPattern,
    mode: DurationMode,
) -> Result<AnswerValue, FuncError> {
    let fs = sorted(g, p)?;
    let mut best = fs[0];
    for f in &fs[1..] {
        let better = match mode {
            DurationMode::Longest => f.duration() > best.duration(),
            DurationMode::Shortest => f.duration() < best.duration(),
        };
        if better {
            best = f;
        }
    }
    Ok(AnswerValue::Entity(slot_entity(p, best)))
}

pub fn find_entities_during_triplet(
    g: &Tkg,
    anchor: &Triplet,
    p: &QueryPattern,
) -> Result<AnswerValue, FuncError> {
    let a = unique_episode(g, anchor)?;
    let fs = sorted(g, p)?;
    let others: Vec<&Fact> = fs.into_iter().filter(|f| *f != a).collect();
    let hits = filter_time(&others, TimeFilter::Overlaps(a.interval));
    Ok(AnswerValue::EntityList(dedup(
        hits.iter().map(|f| slot_entity(p, f)),
    )))
}

pub fn get_entities_in_between(
    g: &Tkg,
    p: &QueryPattern,
    from: &EntityId,
    to: &EntityId,
) -> Result<AnswerValue, FuncError> {
    let fs = sorted(g, p)?;
    let first_start = |e: &EntityId| {
        fs.iter()
            .find(|f| slot_entity(p, f) == *e)
            .map(|f| f.start())
            .ok_or(FuncError::NoMatchingFacts)
    };
    let (lo, hi) = (first_start(from)?, first_start(to)?);
    Ok(AnswerValue::EntityList(
        fs.iter()
            .filter(|f| lo < f.start() && f.start() < hi)
            .map(|f| slot_entity(p, f))
            .collect(),
    ))
}

fn covered_time(fs: &[&Fact]) -> i64 {
    let ivs: Vec<Interval> = fs.iter().map(|f| f.interval).collect();
    merge_intervals(&ivs).total_length
}

pub fn calculate_total_relation_time(
    g: &Tkg,
    p: &QueryPattern,
    simple_sum: bool,
) -> Result<AnswerValue, FuncError> {
    let fs = base(g, p)?;
    let total = if simple_sum {
        fs.iter().map(|f| f.duration()).sum()
    } else {
        covered_time(&fs)
    };
    Ok(AnswerValue::Duration(total))
}

pub fn is_triplet_within_timespan(
    g: &Tkg,
    t: &Triplet,
    window: Interval,
) -> Result<AnswerValue, FuncError> {
    let fs = base(g, &t.pattern())?;
    Ok(AnswerValue::Boolean(
        !filter_time(&fs, TimeFilter::ContainedIn(window)).is_empty(),
    ))
}

/// Lengths of the uncovered stretches of `window`, in order, including the
/// leading and trailing ones.
pub fn window_gaps(fs: &[&Fact], window: Interval) -> Vec<i64> {
    let clipped: Vec<Interval> = filter_time(fs, TimeFilter::Overlaps(window))
        .iter()
        .map(|f| {
            Interval::new(f.start().max(window.start()), f.end().min(window.end()))
                .expect("an overlapping interval clips to a valid one")
        })
        .collect();
    let merged = merge_intervals(&clipped).disjoint;
    let mut gaps = Vec::with_capacity(merged.len() + 1);
    let mut cursor = window.start();
    for iv in &merged {
        gaps.push(iv.start() - cursor);
        cursor = iv.end();
    }
    gaps.push(window.end() - cursor);
    gaps
}

pub fn check_interval_without_relation(
    g: &Tkg,
    p: &QueryPattern,
    window: Interval,
    min_gap: i64,
) -> Result<AnswerValue, FuncError> {
    // An empty match set is a legitimate input here: the whole window is a gap.
    let fs = g.query(p);
    Ok(AnswerValue::Boolean(
        window_gaps(&fs, window)
            .into_iter()
            .any(|gap| gap > min_gap),
    ))
}

pub fn compare_triplet_durations(
    g: &Tkg,
    a: &Triplet,
    b: &Triplet,
    cmp: Comparison,
) -> Result<AnswerValue, FuncError> {
    let da = covered_time(&base(g, &a.pattern())?);
    let db = covered_time(&base(g, &b.pattern())?);
    Ok(AnswerValue::Boolean(match cmp {
        Comparison::Longer => da > db,
        Comparison::Shorter => da < db,
    }))
}

pub fn sequence_of_relations_in_interval(
    g: &Tkg,
    subject: Option<&EntityId>,
    sequence: &[(RelationId, Endpoint)],
    window: Interval,
) -> Result<AnswerValue, FuncError> {
    if sequence.is_empty() {
        return Ok(AnswerValue::Boolean(true));
    }
    let fs = base(g, &QueryPattern::new(subject.cloned(), None, None))?;
    // Greedy: taking the earliest feasible event at each step never rules out
    // a later step that a later choice would have allowed.
    let mut cursor = window.start();
    for (rel, ep) in sequence {
        let next = fs
            .iter()
            .filter(|f| f.relation == *rel)
            .map(|f| endpoint_of(f, *ep))
            .filter(|t| *t >= cursor && *t <= window.end())
            .min();
        match next {
            Some(t) => cursor = t,
            None => return Ok(AnswerValue::Boolean(false)),
        }
    }
    Ok(AnswerValue::Boolean(true))
}

pub fn count_relations_with_duration(
    g: &Tkg,
    p: &QueryPattern,
    pred: DurationPredicate,
    window: Interval,
) -> Result<AnswerValue, FuncError> {
    let fs = base(g, p)?;
    let overlapping = filter_time(&fs, TimeFilter::Overlaps(window));
    Ok(AnswerValue::Count(
        filter_duration(&overlapping, pred).len() as i64,
    ))
}
