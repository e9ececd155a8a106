//! Question instances: parameter sampling, rendering and verification.

use std::collections::HashSet;
use std::path::Path;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::templates::{fill, templates_for, QuestionTemplate};
use super::GenError;
use crate::answer::{AnswerType, AnswerValue};
use crate::funcset::{
    evaluate, Comparison, Direction, DurationMode, FunctionCall, QuestionType, Triplet, TypedCall,
    Which,
};
use crate::oracle;
use crate::primitives::{sort_facts, Comparator, DurationPredicate, Endpoint, SortKey};
use crate::seed::derive_seed;
use crate::tkg::{
    estimate_tokens, EntityId, Fact, FactRecord, Interval, QueryPattern, SentenceTemplates, Tkg,
};

/// Parameter samples tried per instance before giving up on a type.
pub const MAX_ATTEMPTS: usize = 1_000;
/// The first half of the attempts insists on well-posed questions (unique
/// pivots, untied extremes, non-empty lists, balanced booleans).
const STRICT_ATTEMPTS: usize = MAX_ATTEMPTS / 2;
/// Attempts spent on one template before moving to the next.
const ATTEMPTS_PER_TEMPLATE: usize = 100;

/// Graph backing an instance: inline fact records or a path relative to the
/// dataset file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TkgRef {
    Inline(Vec<FactRecord>),
    Path(String),
}

impl TkgRef {
    pub fn load(&self, base_dir: Option<&Path>) -> Result<Tkg, GenError> {
        match self {
            TkgRef::Inline(records) => Ok(Tkg::from_records(records.iter().cloned())?),
            TkgRef::Path(p) => {
                let path = match base_dir {
                    Some(dir) => dir.join(p),
                    None => p.into(),
                };
                Ok(Tkg::load_path(path)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub id: String,
    #[serde(rename = "type")]
    pub question_type: QuestionType,
    pub question: String,
    pub answer_type: AnswerType,
    pub gold: AnswerValue,
    pub canonical_call: FunctionCall,
    pub tkg: TkgRef,
    pub tkg_text: String,
    pub token_estimate: usize,
    /// Identifier of the template the question was rendered from.
    #[serde(default)]
    pub template: String,
}

impl TaskInstance {
    pub fn load_tkg(&self, base_dir: Option<&Path>) -> Result<Tkg, GenError> {
        self.tkg.load(base_dir)
    }

    /// The first `n` lines of the rendered graph.
    pub fn excerpt(&self, n: usize) -> String {
        self.tkg_text.lines().take(n).collect::<Vec<_>>().join("\n")
    }
}

#[derive(Debug, Clone)]
pub struct InstanceConfig {
    pub per_type: usize,
    pub types: Vec<QuestionType>,
    pub seed: u64,
    /// Store this path in every instance instead of the inline fact array.
    pub tkg_path: Option<String>,
    pub sentence_templates: SentenceTemplates,
}

impl InstanceConfig {
    pub fn new(per_type: usize, seed: u64) -> Self {
        Self {
            per_type,
            types: QuestionType::ALL.to_vec(),
            seed,
            tkg_path: None,
            sentence_templates: SentenceTemplates::default(),
        }
    }
}

pub fn generate_instances(
    g: &Tkg,
    per_type: usize,
    types: &[QuestionType],
    seed: u64,
) -> Result<Vec<TaskInstance>, GenError> {
    let cfg = InstanceConfig {
        types: types.to_vec(),
        ..InstanceConfig::new(per_type, seed)
    };
    generate_instances_with(g, &cfg)
}

pub fn generate_instances_with(
    g: &Tkg,
    cfg: &InstanceConfig,
) -> Result<Vec<TaskInstance>, GenError> {
    if g.is_empty() {
        return Err(GenError::InvalidParams(
            "cannot generate questions over an empty graph".into(),
        ));
    }
    let tkg_text = g.render_text(&cfg.sentence_templates, derive_seed(cfg.seed, "render"));
    let token_estimate = estimate_tokens(&tkg_text);
    let tkg_ref = match &cfg.tkg_path {
        Some(p) => TkgRef::Path(p.clone()),
        None => TkgRef::Inline(g.records()),
    };
    let ix = GraphIndex::new(g);
    let mut out = Vec::with_capacity(cfg.per_type * cfg.types.len());
    for &q in &cfg.types {
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &format!("params/{}", q.name())));
        let mut order: Vec<usize> = (0..templates_for(q).len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.seed,
            &format!("templates/{}", q.name()),
        )));
        let mut used: HashSet<String> = HashSet::new();
        for i in 0..cfg.per_type {
            let (tpl, call, gold) = sample_instance(&ix, q, i, &order, &mut rng, &mut used)?;
            let question = fill(tpl.text, &render_values(&call));
            out.push(TaskInstance {
                id: format!("{}-{:03}", q.name(), i),
                question_type: q,
                question,
                answer_type: call.answer_type(),
                gold,
                canonical_call: call.to_call(),
                tkg: tkg_ref.clone(),
                tkg_text: tkg_text.clone(),
                token_estimate,
                template: tpl.id(),
            });
        }
    }
    Ok(out)
}

fn sample_instance(
    ix: &GraphIndex,
    q: QuestionType,
    i: usize,
    order: &[usize],
    rng: &mut ChaCha8Rng,
    used: &mut HashSet<String>,
) -> Result<(QuestionTemplate, TypedCall, AnswerValue), GenError> {
    let templates = templates_for(q);
    let target = i.is_multiple_of(2);
    for attempt in 0..MAX_ATTEMPTS {
        let tpl = templates[order[(i + attempt / ATTEMPTS_PER_TEMPLATE) % order.len()]];
        let strict = attempt < STRICT_ATTEMPTS;
        let Some(call) = sample_call(ix, q, tpl.variant, strict, target, rng) else {
            continue;
        };
        let Ok(gold) = evaluate(ix.g, &call) else {
            continue;
        };
        if strict && !well_posed(ix, &call, &gold, target) {
            continue;
        }
        let key = call.to_call().to_string();
        if strict && used.contains(&key) {
            continue;
        }
        used.insert(key);
        return Ok((tpl, call, gold));
    }
    Err(GenError::UnsatisfiableType(q))
}

// ---------------------------------------------------------------------------
// graph summaries used by the samplers

struct GraphIndex<'g> {
    g: &'g Tkg,
    facts: Vec<&'g Fact>,
    /// Facts grouped by triple, in first-appearance order.
    triples: IndexMap<(EntityId, crate::tkg::RelationId, EntityId), Vec<&'g Fact>>,
    single: Vec<&'g Fact>,
}

impl<'g> GraphIndex<'g> {
    fn new(g: &'g Tkg) -> Self {
        let facts: Vec<&Fact> = g.facts().iter().collect();
        let mut triples: IndexMap<_, Vec<&Fact>> = IndexMap::new();
        for f in &facts {
            triples
                .entry((f.subject.clone(), f.relation.clone(), f.object.clone()))
                .or_default()
                .push(*f);
        }
        let single = triples
            .values()
            .filter(|v| v.len() == 1)
            .map(|v| v[0])
            .collect();
        Self {
            g,
            facts,
            triples,
            single,
        }
    }

    fn any_fact(&self, rng: &mut ChaCha8Rng) -> &'g Fact {
        self.facts[rng.gen_range(0..self.facts.len())]
    }

    fn any_triplet(&self, rng: &mut ChaCha8Rng) -> (Triplet, usize) {
        let (k, v) = self
            .triples
            .get_index(rng.gen_range(0..self.triples.len()))
            .expect("index in range");
        (Triplet::new(k.0.clone(), k.1.clone(), k.2.clone()), v.len())
    }

    fn single_anchor(&self, rng: &mut ChaCha8Rng) -> Option<&'g Fact> {
        self.single.choose(rng).copied()
    }

    fn sorted(&self, p: &QueryPattern) -> Vec<&'g Fact> {
        sort_facts(&self.g.query(p), SortKey::START_ASC)
    }
}

fn triplet_of(f: &Fact) -> Triplet {
    Triplet::new(f.subject.clone(), f.relation.clone(), f.object.clone())
}

fn pattern_for(variant: &str, f: &Fact) -> QueryPattern {
    if variant == "subj" {
        QueryPattern::new(None, Some(f.relation.clone()), Some(f.object.clone()))
    } else {
        QueryPattern::new(Some(f.subject.clone()), Some(f.relation.clone()), None)
    }
}

fn wild(p: &QueryPattern, f: &Fact) -> EntityId {
    if p.subject.is_none() {
        f.subject.clone()
    } else {
        f.object.clone()
    }
}

fn window_around(rng: &mut ChaCha8Rng, facts: &[&Fact]) -> Interval {
    let a = facts[rng.gen_range(0..facts.len())];
    let b = facts[rng.gen_range(0..facts.len())];
    let lo = a.start().min(b.start()) + rng.gen_range(-4..=3);
    let hi = a.end().max(b.end()) + rng.gen_range(-3..=4);
    Interval::new(lo.min(hi), lo.max(hi)).expect("ordered")
}

fn sample_call(
    ix: &GraphIndex,
    q: QuestionType,
    variant: &str,
    strict: bool,
    target: bool,
    rng: &mut ChaCha8Rng,
) -> Option<TypedCall> {
    use QuestionType as Q;
    let f = ix.any_fact(rng);
    let pattern = pattern_for(variant, f);
    Some(match q {
        Q::Timeline => TypedCall::Timeline { pattern },
        Q::BeforeAfter => {
            let fs = ix.sorted(&pattern);
            let direction = *[Direction::Before, Direction::After].choose(rng)?;
            if fs.len() < 2 {
                return None;
            }
            let i = match direction {
                Direction::Before => rng.gen_range(1..fs.len()),
                Direction::After => rng.gen_range(0..fs.len() - 1),
            };
            TypedCall::BeforeAfter {
                pivot: wild(&pattern, fs[i]),
                pattern,
                direction,
            }
        }
        Q::EventAtTimeT => TypedCall::EventAtTimeT {
            time: rng.gen_range(f.start()..=f.end()),
            pattern,
        },
        Q::EventAtWhatTime => {
            let (triplet, eps) = ix.any_triplet(rng);
            TypedCall::EventAtWhatTime {
                triplet,
                endpoint: variant.parse().ok()?,
                occurrence: (eps > 1).then(|| rng.gen_range(1..=eps)),
            }
        }
        Q::FirstLast => TypedCall::FirstLast {
            pattern,
            which: *[Which::First, Which::Last].choose(rng)?,
        },
        Q::EventAtTheTimeOfAnotherEvent => {
            let a = ix.single_anchor(rng)?;
            let anchor_point = *[Endpoint::Start, Endpoint::End].choose(rng)?;
            let t = match anchor_point {
                Endpoint::Start => a.start(),
                Endpoint::End => a.end(),
            };
            let covering: Vec<&Fact> = ix
                .facts
                .iter()
                .copied()
                .filter(|x| *x != a && x.interval.contains_point(t))
                .collect();
            let other = match covering.choose(rng) {
                Some(x) => *x,
                None if strict => return None,
                None => f,
            };
            TypedCall::EventAtTheTimeOfAnotherEvent {
                anchor: triplet_of(a),
                anchor_point,
                pattern: pattern_for(variant, other),
            }
        }
        Q::NumberOfEventsInTimeInterval => {
            let fs = ix.g.query(&pattern);
            TypedCall::NumberOfEventsInTimeInterval {
                window: window_around(rng, &fs),
                pattern,
            }
        }
        Q::RelationDuration => {
            let (triplet, eps) = ix.any_triplet(rng);
            TypedCall::RelationDuration {
                triplet,
                occurrence: (eps > 1).then(|| rng.gen_range(1..=eps)),
            }
        }
        Q::GetEntityByDuration => TypedCall::GetEntityByDuration {
            pattern,
            mode: *[DurationMode::Longest, DurationMode::Shortest].choose(rng)?,
        },
        Q::FindEntitiesDuringTriplet => {
            let a = ix.single_anchor(rng)?;
            let overlapping: Vec<&Fact> = ix
                .facts
                .iter()
                .copied()
                .filter(|x| *x != a && x.interval.overlaps(&a.interval))
                .collect();
            let other = match overlapping.choose(rng) {
                Some(x) => *x,
                None if strict => return None,
                None => f,
            };
            TypedCall::FindEntitiesDuringTriplet {
                anchor: triplet_of(a),
                pattern: pattern_for(variant, other),
            }
        }
        Q::GetEntitiesInBetween => {
            let fs = ix.sorted(&pattern);
            if fs.len() < 2 {
                return None;
            }
            let i = rng.gen_range(0..fs.len() - 1);
            let j = rng.gen_range(i + 1..fs.len());
            TypedCall::GetEntitiesInBetween {
                from: wild(&pattern, fs[i]),
                to: wild(&pattern, fs[j]),
                pattern,
            }
        }
        Q::CalculateTotalRelationTime => TypedCall::CalculateTotalRelationTime {
            pattern,
            simple_sum: false,
        },
        Q::IsTripletWithinTimespan => {
            let eps = &ix.triples[&(f.subject.clone(), f.relation.clone(), f.object.clone())];
            let e = eps[rng.gen_range(0..eps.len())];
            let want = if strict { target } else { rng.gen_bool(0.5) };
            let window = if want {
                Interval::new(
                    e.start() - rng.gen_range(0..=5),
                    e.end() + rng.gen_range(0..=5),
                )
            } else if rng.gen_bool(0.5) {
                Interval::new(
                    e.start() + rng.gen_range(1..=e.duration().max(1)),
                    e.end() + rng.gen_range(0..=5),
                )
            } else {
                Interval::new(
                    e.start() - rng.gen_range(0..=5),
                    e.end() - rng.gen_range(1..=e.duration().max(1)),
                )
            };
            TypedCall::IsTripletWithinTimespan {
                triplet: triplet_of(f),
                window: window.ok()?,
            }
        }
        Q::CheckIntervalWithoutRelation => {
            let fs = ix.g.query(&pattern);
            TypedCall::CheckIntervalWithoutRelation {
                window: window_around(rng, &fs),
                min_gap: rng.gen_range(1..=6),
                pattern,
            }
        }
        Q::CompareTripletDurations => {
            let (second, _) = ix.any_triplet(rng);
            let first = triplet_of(f);
            if first == second {
                return None;
            }
            TypedCall::CompareTripletDurations {
                first,
                second,
                comparison: *[Comparison::Longer, Comparison::Shorter].choose(rng)?,
            }
        }
        Q::SequenceOfRelationsInInterval => {
            let own =
                ix.g.query(&QueryPattern::new(Some(f.subject.clone()), None, None));
            let steps = if rng.gen_bool(0.2) { 3 } else { 2 };
            let mut sequence = Vec::with_capacity(steps);
            let mut times = Vec::with_capacity(steps);
            for _ in 0..steps {
                let x = own[rng.gen_range(0..own.len())];
                let ep = *[Endpoint::Start, Endpoint::End].choose(rng)?;
                times.push(if ep == Endpoint::Start {
                    x.start()
                } else {
                    x.end()
                });
                sequence.push((x.relation.clone(), ep));
            }
            let lo = *times.iter().min()? - rng.gen_range(0..=3);
            let hi = *times.iter().max()? + rng.gen_range(0..=3);
            TypedCall::SequenceOfRelationsInInterval {
                subject: Some(f.subject.clone()),
                sequence,
                window: Interval::new(lo, hi).ok()?,
            }
        }
        Q::CountRelationsWithDuration => {
            let fs = ix.g.query(&pattern);
            TypedCall::CountRelationsWithDuration {
                window: window_around(rng, &fs),
                predicate: DurationPredicate::new(
                    *Comparator::ALL.choose(rng)?,
                    rng.gen_range(1..=10),
                ),
                pattern,
            }
        }
    })
}

/// Extra conditions applied during the strict phase.
fn well_posed(ix: &GraphIndex, call: &TypedCall, gold: &AnswerValue, target: bool) -> bool {
    let count_of =
        |p: &QueryPattern, e: &EntityId| ix.g.query(p).iter().filter(|f| wild(p, f) == *e).count();
    match (call, gold) {
        (_, AnswerValue::EntityList(es)) if es.is_empty() => false,
        (_, AnswerValue::Boolean(b)) => *b == target,
        (TypedCall::Timeline { pattern }, _) => ix.g.query(pattern).len() >= 2,
        (TypedCall::BeforeAfter { pattern, pivot, .. }, AnswerValue::Entity(ans)) => {
            let fs = ix.sorted(pattern);
            let starts: Vec<i64> = fs.iter().map(|f| f.start()).collect();
            let distinct: HashSet<i64> = starts.iter().copied().collect();
            count_of(pattern, pivot) == 1
                && count_of(pattern, ans) == 1
                && distinct.len() == starts.len()
        }
        (TypedCall::FirstLast { pattern, which }, _) => {
            let fs = ix.sorted(pattern);
            fs.len() >= 2
                && match which {
                    Which::First => fs[0].start() < fs[1].start(),
                    Which::Last => fs[fs.len() - 1].start() > fs[fs.len() - 2].start(),
                }
        }
        (TypedCall::GetEntityByDuration { pattern, mode }, _) => {
            let ds: Vec<i64> = ix.g.query(pattern).iter().map(|f| f.duration()).collect();
            let best = match mode {
                DurationMode::Longest => ds.iter().max(),
                DurationMode::Shortest => ds.iter().min(),
            };
            ds.len() >= 2 && best.is_some_and(|b| ds.iter().filter(|d| *d == b).count() == 1)
        }
        (TypedCall::GetEntitiesInBetween { pattern, from, to }, _) => {
            count_of(pattern, from) == 1 && count_of(pattern, to) == 1
        }
        (TypedCall::CalculateTotalRelationTime { pattern, .. }, _) => {
            ix.g.query(pattern).len() >= 2
        }
        (
            TypedCall::NumberOfEventsInTimeInterval { .. }
            | TypedCall::CountRelationsWithDuration { .. },
            AnswerValue::Count(n),
        ) => *n >= 1,
        _ => true,
    }
}

fn ordinal(k: usize) -> String {
    match k {
        1 => "first".into(),
        2 => "second".into(),
        3 => "third".into(),
        n => format!("{n}th"),
    }
}

fn endpoint_verb(e: Endpoint) -> &'static str {
    match e {
        Endpoint::Start => "started",
        Endpoint::End => "stopped",
    }
}

fn comparator_phrase(c: Comparator) -> &'static str {
    match c {
        Comparator::Lt => "less than",
        Comparator::Le => "at most",
        Comparator::Eq => "exactly",
        Comparator::Ge => "at least",
        Comparator::Gt => "more than",
    }
}

/// Placeholder values for a call. Only the ones the template uses matter.
fn render_values(call: &TypedCall) -> Vec<(&'static str, String)> {
    let mut v: Vec<(&'static str, String)> = Vec::new();
    let pat = |v: &mut Vec<(&'static str, String)>, p: &QueryPattern| {
        if let Some(s) = &p.subject {
            v.push(("s", s.to_string()));
        }
        if let Some(r) = &p.relation {
            v.push(("r", r.to_string()));
        }
        if let Some(o) = &p.object {
            v.push(("o", o.to_string()));
        }
    };
    let trip = |v: &mut Vec<(&'static str, String)>, t: &Triplet, keys: [&'static str; 3]| {
        v.push((keys[0], t.subject.to_string()));
        v.push((keys[1], t.relation.to_string()));
        v.push((keys[2], t.object.to_string()));
    };
    let window = |v: &mut Vec<(&'static str, String)>, w: &Interval| {
        v.push(("wa", w.start().to_string()));
        v.push(("wb", w.end().to_string()));
    };
    let occ = |v: &mut Vec<(&'static str, String)>, o: &Option<usize>| {
        v.push((
            "occ",
            o.map(|k| format!(" for the {} time", ordinal(k)))
                .unwrap_or_default(),
        ));
    };
    match call {
        TypedCall::Timeline { pattern } | TypedCall::CalculateTotalRelationTime { pattern, .. } => {
            pat(&mut v, pattern)
        }
        TypedCall::BeforeAfter {
            pattern,
            pivot,
            direction,
        } => {
            pat(&mut v, pattern);
            v.push(("pivot", pivot.to_string()));
            v.push(("dir", direction.as_str().to_string()));
        }
        TypedCall::EventAtTimeT { pattern, time } => {
            pat(&mut v, pattern);
            v.push(("t", time.to_string()));
        }
        TypedCall::EventAtWhatTime {
            triplet,
            occurrence,
            ..
        }
        | TypedCall::RelationDuration {
            triplet,
            occurrence,
        } => {
            trip(&mut v, triplet, ["s", "r", "o"]);
            occ(&mut v, occurrence);
        }
        TypedCall::FirstLast { pattern, which } => {
            pat(&mut v, pattern);
            v.push(("which", which.as_str().to_string()));
        }
        TypedCall::EventAtTheTimeOfAnotherEvent {
            anchor,
            anchor_point,
            pattern,
        } => {
            trip(&mut v, anchor, ["as", "ar", "ao"]);
            v.push(("anchor_when", endpoint_verb(*anchor_point).to_string()));
            pat(&mut v, pattern);
        }
        TypedCall::NumberOfEventsInTimeInterval { pattern, window: w } => {
            pat(&mut v, pattern);
            window(&mut v, w);
        }
        TypedCall::GetEntityByDuration { pattern, mode } => {
            pat(&mut v, pattern);
            v.push(("mode", mode.as_str().to_string()));
        }
        TypedCall::FindEntitiesDuringTriplet { anchor, pattern } => {
            trip(&mut v, anchor, ["as", "ar", "ao"]);
            pat(&mut v, pattern);
        }
        TypedCall::GetEntitiesInBetween { pattern, from, to } => {
            pat(&mut v, pattern);
            v.push(("from", from.to_string()));
            v.push(("to", to.to_string()));
        }
        TypedCall::IsTripletWithinTimespan { triplet, window: w } => {
            trip(&mut v, triplet, ["s", "r", "o"]);
            window(&mut v, w);
        }
        TypedCall::CheckIntervalWithoutRelation {
            pattern,
            window: w,
            min_gap,
        } => {
            pat(&mut v, pattern);
            window(&mut v, w);
            v.push(("gap", min_gap.to_string()));
        }
        TypedCall::CompareTripletDurations {
            first,
            second,
            comparison,
        } => {
            trip(&mut v, first, ["s", "r", "o"]);
            trip(&mut v, second, ["s2", "r2", "o2"]);
            v.push(("cmp", comparison.as_str().to_string()));
        }
        TypedCall::SequenceOfRelationsInInterval {
            subject,
            sequence,
            window: w,
        } => {
            v.push((
                "s",
                subject
                    .as_ref()
                    .map_or_else(|| "some entity".to_string(), |s| s.to_string()),
            ));
            let steps: Vec<String> = sequence
                .iter()
                .map(|(r, e)| match e {
                    Endpoint::Start => format!("start relation {r}"),
                    Endpoint::End => format!("end relation {r}"),
                })
                .collect();
            v.push(("seq", steps.join(", then ")));
            window(&mut v, w);
        }
        TypedCall::CountRelationsWithDuration {
            pattern,
            predicate,
            window: w,
        } => {
            pat(&mut v, pattern);
            v.push(("op", comparator_phrase(predicate.comparator).to_string()));
            v.push(("n", predicate.threshold.to_string()));
            window(&mut v, w);
        }
    }
    v
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub id: String,
    pub gold: AnswerValue,
    /// Oracle answer, or the oracle's error message.
    pub oracle: Result<AnswerValue, String>,
    /// Solver answer for the canonical call, or its error message.
    pub dispatched: Result<AnswerValue, String>,
    pub answer_type_ok: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.answer_type_ok
            && self.oracle.as_ref() == Ok(&self.gold)
            && self.dispatched.as_ref() == Ok(&self.gold)
    }
}

/// Re-derive the gold answer with the oracle and with the solver.
pub fn verify_instance(
    t: &TaskInstance,
    base_dir: Option<&Path>,
) -> Result<Verification, GenError> {
    let g = t.load_tkg(base_dir)?;
    let typed = TypedCall::from_call(&t.canonical_call);
    let oracle = typed
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|c| oracle::evaluate(&g, c).map_err(|e| e.to_string()));
    let dispatched = typed
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|c| evaluate(&g, c).map_err(|e| e.to_string()));
    let answer_type_ok = t.gold.answer_type() == t.answer_type
        && typed.as_ref().is_ok_and(|c| {
            c.question_type() == t.question_type && c.answer_type() == t.answer_type
        });
    Ok(Verification {
        id: t.id.clone(),
        gold: t.gold.clone(),
        oracle,
        dispatched,
        answer_type_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratagen::{generate_graph, GraphParams};

    fn small_graph() -> Tkg {
        generate_graph(&GraphParams {
            n_entities: 50,
            n_relations: 8,
            n_facts: 120,
            seed: 7,
            ..GraphParams::default()
        })
        .unwrap()
    }

    #[test]
    fn all_types_generate_and_verify() {
        let g = small_graph();
        let xs = generate_instances(&g, 10, &QuestionType::ALL, 3).unwrap();
        assert_eq!(xs.len(), 170);
        for x in &xs {
            let v = verify_instance(x, None).unwrap();
            assert!(v.passed(), "{}: {:?}", x.id, v);
            assert!(
                !x.question.contains('<'),
                "{}: unfilled placeholder in {}",
                x.id,
                x.question
            );
        }
    }

    #[test]
    fn corrupted_gold_fails() {
        let g = small_graph();
        let mut x = generate_instances(&g, 1, &[QuestionType::RelationDuration], 1)
            .unwrap()
            .remove(0);
        let AnswerValue::Duration(d) = x.gold else {
            panic!()
        };
        x.gold = AnswerValue::Duration(d + 1);
        let v = verify_instance(&x, None).unwrap();
        assert!(!v.passed());
        assert_eq!(v.oracle, Ok(AnswerValue::Duration(d)));
    }

    #[test]
    fn deterministic_bytes() {
        let g = small_graph();
        let a = generate_instances(&g, 3, &QuestionType::ALL, 9).unwrap();
        let b = generate_instances(&g, 3, &QuestionType::ALL, 9).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
