//! Seeded random graphs and calls shared by the integration tests.

#![allow(dead_code)]

pub mod fixture;

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempqa_core::funcset::{Comparison, Direction, DurationMode, TimeEndpoint, Triplet, Which};
use tempqa_core::primitives::{Comparator, DurationPredicate, Endpoint};
use tempqa_core::{EntityId, Fact, Interval, QueryPattern, QuestionType, RelationId, Tkg, TypedCall};

pub const ENTITIES: usize = 8;
pub const RELATIONS: usize = 3;
pub const T_MIN: i64 = 1990;
pub const T_MAX: i64 = 2030;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ent(i: usize) -> EntityId {
    EntityId::new(format!("E{i}")).unwrap()
}

pub fn rel(i: usize) -> RelationId {
    RelationId::new(format!("R{i}")).unwrap()
}

pub fn random_entity(r: &mut ChaCha8Rng) -> EntityId {
    ent(r.gen_range(1..=ENTITIES))
}

pub fn random_relation(r: &mut ChaCha8Rng) -> RelationId {
    rel(r.gen_range(1..=RELATIONS))
}

pub fn random_interval(r: &mut ChaCha8Rng, max_len: i64) -> Interval {
    let a = r.gen_range(T_MIN..=T_MAX);
    Interval::new(a, a + r.gen_range(0..=max_len)).unwrap()
}

/// A random graph over a small id universe so that queries hit often.
pub fn random_tkg(r: &mut ChaCha8Rng, max_facts: usize) -> Tkg {
    let n = r.gen_range(0..=max_facts);
    let mut seen = HashSet::new();
    let mut facts = Vec::with_capacity(n);
    for _ in 0..n {
        let f = Fact::new(random_entity(r), random_relation(r), random_entity(r), random_interval(r, 10));
        if seen.insert(f.clone()) {
            facts.push(f);
        }
    }
    Tkg::build(facts).unwrap()
}

/// A fact of `g` most of the time, otherwise a random one.
fn seed_fact(r: &mut ChaCha8Rng, g: &Tkg) -> Fact {
    if !g.is_empty() && r.gen_bool(0.85) {
        g.facts()[r.gen_range(0..g.len())].clone()
    } else {
        Fact::new(random_entity(r), random_relation(r), random_entity(r), random_interval(r, 10))
    }
}

/// One wildcard at subject or object, relation bound.
fn slot_pattern(r: &mut ChaCha8Rng, f: &Fact) -> QueryPattern {
    if r.gen_bool(0.5) {
        QueryPattern::new(Some(f.subject.clone()), Some(f.relation.clone()), None)
    } else {
        QueryPattern::new(None, Some(f.relation.clone()), Some(f.object.clone()))
    }
}

/// Any combination of bound and open positions.
fn free_pattern(r: &mut ChaCha8Rng, f: &Fact) -> QueryPattern {
    QueryPattern::new(
        r.gen_bool(0.6).then(|| f.subject.clone()),
        r.gen_bool(0.7).then(|| f.relation.clone()),
        r.gen_bool(0.5).then(|| f.object.clone()),
    )
}

fn triplet(f: &Fact) -> Triplet {
    Triplet::new(f.subject.clone(), f.relation.clone(), f.object.clone())
}

fn near(r: &mut ChaCha8Rng, t: i64) -> i64 {
    t + r.gen_range(-3..=3)
}

fn window(r: &mut ChaCha8Rng, f: &Fact) -> Interval {
    let a = near(r, f.start());
    let b = near(r, f.end()).max(a);
    if r.gen_bool(0.2) {
        random_interval(r, 30)
    } else {
        Interval::new(a, b + r.gen_range(0..=6)).unwrap()
    }
}

fn entity_near(r: &mut ChaCha8Rng, g: &Tkg, p: &QueryPattern) -> EntityId {
    let hits = g.query(p);
    match hits.choose(r) {
        Some(f) if r.gen_bool(0.9) => {
            if p.subject.is_none() {
                f.subject.clone()
            } else {
                f.object.clone()
            }
        }
        _ => random_entity(r),
    }
}

pub fn random_call(r: &mut ChaCha8Rng, g: &Tkg, q: QuestionType) -> TypedCall {
    use QuestionType as Q;
    let f = seed_fact(r, g);
    let endpoint = *[Endpoint::Start, Endpoint::End].choose(r).unwrap();
    let occurrence = r.gen_bool(0.5).then(|| r.gen_range(1..=3));
    match q {
        Q::Timeline => TypedCall::Timeline {
            pattern: slot_pattern(r, &f),
        },
        Q::BeforeAfter => {
            let pattern = slot_pattern(r, &f);
            TypedCall::BeforeAfter {
                pivot: entity_near(r, g, &pattern),
                pattern,
                direction: *[Direction::Before, Direction::After].choose(r).unwrap(),
            }
        }
        Q::EventAtTimeT => TypedCall::EventAtTimeT {
            time: r.gen_range(f.start() - 2..=f.end() + 2),
            pattern: slot_pattern(r, &f),
        },
        Q::EventAtWhatTime => TypedCall::EventAtWhatTime {
            triplet: triplet(&f),
            endpoint: *[TimeEndpoint::Start, TimeEndpoint::End, TimeEndpoint::Interval].choose(r).unwrap(),
            occurrence,
        },
        Q::FirstLast => TypedCall::FirstLast {
            pattern: slot_pattern(r, &f),
            which: *[Which::First, Which::Last].choose(r).unwrap(),
        },
        Q::EventAtTheTimeOfAnotherEvent => {
            let other = seed_fact(r, g);
            TypedCall::EventAtTheTimeOfAnotherEvent {
                anchor: triplet(&f),
                anchor_point: endpoint,
                pattern: slot_pattern(r, &other),
            }
        }
        Q::NumberOfEventsInTimeInterval => TypedCall::NumberOfEventsInTimeInterval {
            pattern: free_pattern(r, &f),
            window: window(r, &f),
        },
        Q::RelationDuration => TypedCall::RelationDuration {
            triplet: triplet(&f),
            occurrence,
        },
        Q::GetEntityByDuration => TypedCall::GetEntityByDuration {
            pattern: slot_pattern(r, &f),
            mode: *[DurationMode::Longest, DurationMode::Shortest].choose(r).unwrap(),
        },
        Q::FindEntitiesDuringTriplet => {
            let other = seed_fact(r, g);
            TypedCall::FindEntitiesDuringTriplet {
                anchor: triplet(&f),
                pattern: slot_pattern(r, &other),
            }
        }
        Q::GetEntitiesInBetween => {
            let pattern = slot_pattern(r, &f);
            TypedCall::GetEntitiesInBetween {
                from: entity_near(r, g, &pattern),
                to: entity_near(r, g, &pattern),
                pattern,
            }
        }
        Q::CalculateTotalRelationTime => TypedCall::CalculateTotalRelationTime {
            pattern: free_pattern(r, &f),
            simple_sum: r.gen_bool(0.3),
        },
        Q::IsTripletWithinTimespan => TypedCall::IsTripletWithinTimespan {
            triplet: triplet(&f),
            window: window(r, &f),
        },
        Q::CheckIntervalWithoutRelation => TypedCall::CheckIntervalWithoutRelation {
            pattern: free_pattern(r, &f),
            window: window(r, &f),
            min_gap: r.gen_range(0..=6),
        },
        Q::CompareTripletDurations => {
            let other = seed_fact(r, g);
            TypedCall::CompareTripletDurations {
                first: triplet(&f),
                second: if r.gen_bool(0.1) { triplet(&f) } else { triplet(&other) },
                comparison: *[Comparison::Longer, Comparison::Shorter].choose(r).unwrap(),
            }
        }
        Q::SequenceOfRelationsInInterval => {
            let steps = r.gen_range(0..=3);
            let sequence = (0..steps)
                .map(|_| {
                    let rr = if r.gen_bool(0.7) { seed_fact(r, g).relation } else { random_relation(r) };
                    (rr, *[Endpoint::Start, Endpoint::End].choose(r).unwrap())
                })
                .collect();
            TypedCall::SequenceOfRelationsInInterval {
                subject: r.gen_bool(0.8).then(|| f.subject.clone()),
                sequence,
                window: window(r, &f),
            }
        }
        Q::CountRelationsWithDuration => TypedCall::CountRelationsWithDuration {
            pattern: free_pattern(r, &f),
            predicate: DurationPredicate::new(*Comparator::ALL.choose(r).unwrap(), r.gen_range(0..=10)),
            window: window(r, &f),
        },
    }
}
