//! Loosely typed [`FunctionCall`]s as they arrive from an LLM or a file, and
//! their checked [`TypedCall`] form.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::schema::{params_for, ParamSpec};
use super::{FuncError, QuestionType};
use crate::answer::AnswerType;
use crate::primitives::{Comparator, DurationPredicate, Endpoint};
use crate::tkg::{EntityId, Interval, QueryPattern, RelationId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCall {
    pub name: String,
    #[serde(default)]
    pub arguments: IndexMap<String, Value>,
}

impl FunctionCall {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            arguments: IndexMap::new(),
        }
    }

    pub fn arg(mut self, key: &str, value: Value) -> Self {
        self.arguments.insert(key.to_string(), value);
        self
    }
}

impl fmt::Display for FunctionCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self
            .arguments
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "{}({})", self.name, args.join(", "))
    }
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];
            pub const NAMES: &'static [&'static str] = &[$($text),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!("expected one of {:?}, got `{}`", $name::NAMES, other)),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Direction { Before => "before", After => "after" });
keyword_enum!(Which { First => "first", Last => "last" });
keyword_enum!(DurationMode { Longest => "longest", Shortest => "shortest" });
keyword_enum!(Comparison { Longer => "longer", Shorter => "shorter" });
keyword_enum!(TimeEndpoint { Start => "start", End => "end", Interval => "interval" });

/// Fully bound `(s, r, o)` reference to one relation, possibly with several
/// episodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triplet {
    pub subject: EntityId,
    pub relation: RelationId,
    pub object: EntityId,
}

impl Triplet {
    pub fn new(subject: EntityId, relation: RelationId, object: EntityId) -> Self {
        Self {
            subject,
            relation,
            object,
        }
    }

    pub fn pattern(&self) -> QueryPattern {
        QueryPattern::new(
            Some(self.subject.clone()),
            Some(self.relation.clone()),
            Some(self.object.clone()),
        )
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.relation, self.object)
    }
}

/// Checked arguments of one of the 17 solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypedCall {
    Timeline {
        pattern: QueryPattern,
    },
    BeforeAfter {
        pattern: QueryPattern,
        pivot: EntityId,
        direction: Direction,
    },
    EventAtTimeT {
        pattern: QueryPattern,
        time: i64,
    },
    EventAtWhatTime {
        triplet: Triplet,
        endpoint: TimeEndpoint,
        occurrence: Option<usize>,
    },
    FirstLast {
        pattern: QueryPattern,
        which: Which,
    },
    EventAtTheTimeOfAnotherEvent {
        anchor: Triplet,
        anchor_point: Endpoint,
        pattern: QueryPattern,
    },
    NumberOfEventsInTimeInterval {
        pattern: QueryPattern,
        window: Interval,
    },
    RelationDuration {
        triplet: Triplet,
        occurrence: Option<usize>,
    },
    GetEntityByDuration {
        pattern: QueryPattern,
        mode: DurationMode,
    },
    FindEntitiesDuringTriplet {
        anchor: Triplet,
        pattern: QueryPattern,
    },
    GetEntitiesInBetween {
        pattern: QueryPattern,
        from: EntityId,
        to: EntityId,
    },
    CalculateTotalRelationTime {
        pattern: QueryPattern,
        simple_sum: bool,
    },
    IsTripletWithinTimespan {
        triplet: Triplet,
        window: Interval,
    },
    CheckIntervalWithoutRelation {
        pattern: QueryPattern,
        window: Interval,
        min_gap: i64,
    },
    CompareTripletDurations {
        first: Triplet,
        second: Triplet,
        comparison: Comparison,
    },
    SequenceOfRelationsInInterval {
        subject: Option<EntityId>,
        sequence: Vec<(RelationId, Endpoint)>,
        window: Interval,
    },
    CountRelationsWithDuration {
        pattern: QueryPattern,
        predicate: DurationPredicate,
        window: Interval,
    },
}

impl TypedCall {
    pub fn question_type(&self) -> QuestionType {
        use QuestionType as Q;
        match self {
            TypedCall::Timeline { .. } => Q::Timeline,
            TypedCall::BeforeAfter { .. } => Q::BeforeAfter,
            TypedCall::EventAtTimeT { .. } => Q::EventAtTimeT,
            TypedCall::EventAtWhatTime { .. } => Q::EventAtWhatTime,
            TypedCall::FirstLast { .. } => Q::FirstLast,
            TypedCall::EventAtTheTimeOfAnotherEvent { .. } => Q::EventAtTheTimeOfAnotherEvent,
            TypedCall::NumberOfEventsInTimeInterval { .. } => Q::NumberOfEventsInTimeInterval,
            TypedCall::RelationDuration { .. } => Q::RelationDuration,
            TypedCall::GetEntityByDuration { .. } => Q::GetEntityByDuration,
            TypedCall::FindEntitiesDuringTriplet { .. } => Q::FindEntitiesDuringTriplet,
            TypedCall::GetEntitiesInBetween { .. } => Q::GetEntitiesInBetween,
            TypedCall::CalculateTotalRelationTime { .. } => Q::CalculateTotalRelationTime,
            TypedCall::IsTripletWithinTimespan { .. } => Q::IsTripletWithinTimespan,
            TypedCall::CheckIntervalWithoutRelation { .. } => Q::CheckIntervalWithoutRelation,
            TypedCall::CompareTripletDurations { .. } => Q::CompareTripletDurations,
            TypedCall::SequenceOfRelationsInInterval { .. } => Q::SequenceOfRelationsInInterval,
            TypedCall::CountRelationsWithDuration { .. } => Q::CountRelationsWithDuration,
        }
    }

    /// Answer type this particular call produces. Only `event_at_what_time`
    /// depends on its arguments.
    pub fn answer_type(&self) -> AnswerType {
        match self {
            TypedCall::EventAtWhatTime {
                endpoint: TimeEndpoint::Interval,
                ..
            } => AnswerType::TimeInterval,
            other => other.question_type().answer_type(),
        }
    }

    /// Canonical loosely typed form. Wildcards are written as `"?"`.
    pub fn to_call(&self) -> FunctionCall {
        let mut c = FunctionCall::new(self.question_type().name());
        fn pat(c: FunctionCall, p: &QueryPattern) -> FunctionCall {
            c.arg("subject", slot(p.subject.as_ref()))
                .arg("relation", slot(p.relation.as_ref()))
                .arg("object", slot(p.object.as_ref()))
        }
        fn trip(c: FunctionCall, t: &Triplet) -> FunctionCall {
            c.arg("subject", json!(t.subject.as_str()))
                .arg("relation", json!(t.relation.as_str()))
                .arg("object", json!(t.object.as_str()))
        }
        c = match self {
            TypedCall::Timeline { pattern } => pat(c, pattern),
            TypedCall::BeforeAfter {
                pattern,
                pivot,
                direction,
            } => pat(c, pattern)
                .arg("pivot", json!(pivot.as_str()))
                .arg("direction", json!(direction.as_str())),
            TypedCall::EventAtTimeT { pattern, time } => pat(c, pattern).arg("time", json!(time)),
            TypedCall::EventAtWhatTime {
                triplet,
                endpoint,
                occurrence,
            } => {
                let c = trip(c, triplet).arg("endpoint", json!(endpoint.as_str()));
                match occurrence {
                    Some(k) => c.arg("occurrence", json!(k)),
                    None => c,
                }
            }
            TypedCall::FirstLast { pattern, which } => {
                pat(c, pattern).arg("which", json!(which.as_str()))
            }
            TypedCall::EventAtTheTimeOfAnotherEvent {
                anchor,
                anchor_point,
                pattern,
            } => pat(
                c.arg("anchor", triplet_json(anchor))
                    .arg("anchor_point", json!(endpoint_str(*anchor_point))),
                pattern,
            ),
            TypedCall::NumberOfEventsInTimeInterval { pattern, window } => {
                pat(c, pattern).arg("window", interval_json(window))
            }
            TypedCall::RelationDuration {
                triplet,
                occurrence,
            } => {
                let c = trip(c, triplet);
                match occurrence {
                    Some(k) => c.arg("occurrence", json!(k)),
                    None => c,
                }
            }
            TypedCall::GetEntityByDuration { pattern, mode } => {
                pat(c, pattern).arg("mode", json!(mode.as_str()))
            }
            TypedCall::FindEntitiesDuringTriplet { anchor, pattern } => {
                pat(c.arg("anchor", triplet_json(anchor)), pattern)
            }
            TypedCall::GetEntitiesInBetween { pattern, from, to } => pat(c, pattern)
                .arg("from", json!(from.as_str()))
                .arg("to", json!(to.as_str())),
            TypedCall::CalculateTotalRelationTime {
                pattern,
                simple_sum,
            } => {
                let c = pat(c, pattern);
                if *simple_sum {
                    c.arg("simple_sum", json!(true))
                } else {
                    c
                }
            }
            TypedCall::IsTripletWithinTimespan { triplet, window } => {
                trip(c, triplet).arg("window", interval_json(window))
            }
            TypedCall::CheckIntervalWithoutRelation {
                pattern,
                window,
                min_gap,
            } => pat(c, pattern)
                .arg("window", interval_json(window))
                .arg("min_gap", json!(min_gap)),
            TypedCall::CompareTripletDurations {
                first,
                second,
                comparison,
            } => c
                .arg("first", triplet_json(first))
                .arg("second", triplet_json(second))
                .arg("comparison", json!(comparison.as_str())),
            TypedCall::SequenceOfRelationsInInterval {
                subject,
                sequence,
                window,
            } => {
                let seq: Vec<Value> = sequence
                    .iter()
                    .map(|(r, e)| json!([r.as_str(), endpoint_str(*e)]))
                    .collect();
                c.arg("subject", slot(subject.as_ref()))
                    .arg("sequence", Value::Array(seq))
                    .arg("window", interval_json(window))
            }
            TypedCall::CountRelationsWithDuration {
                pattern,
                predicate,
                window,
            } => pat(c, pattern)
                .arg("comparator", json!(predicate.comparator.symbol()))
                .arg("threshold", json!(predicate.threshold))
                .arg("window", interval_json(window)),
        };
        c
    }

    /// Type-check a loosely typed call against the function's parameter list.
    pub fn from_call(call: &FunctionCall) -> Result<TypedCall, FuncError> {
        let qtype: QuestionType = call
            .name
            .parse()
            .map_err(|_| FuncError::UnknownFunction(call.name.clone()))?;
        let params = params_for(qtype);
        for key in call.arguments.keys() {
            if !params.iter().any(|p| p.name == key) {
                return Err(FuncError::arg(key, "unknown parameter"));
            }
        }
        let a = Args {
            map: &call.arguments,
            params,
        };
        use QuestionType as Q;
        let typed = match qtype {
            Q::Timeline => TypedCall::Timeline {
                pattern: a.entity_pattern()?,
            },
            Q::BeforeAfter => TypedCall::BeforeAfter {
                pattern: a.entity_pattern()?,
                pivot: a.entity("pivot")?,
                direction: a.keyword("direction")?,
            },
            Q::EventAtTimeT => TypedCall::EventAtTimeT {
                pattern: a.entity_pattern()?,
                time: a.int("time")?,
            },
            Q::EventAtWhatTime => TypedCall::EventAtWhatTime {
                triplet: a.bound_triplet()?,
                endpoint: a.keyword("endpoint")?,
                occurrence: a.occurrence()?,
            },
            Q::FirstLast => TypedCall::FirstLast {
                pattern: a.entity_pattern()?,
                which: a.keyword("which")?,
            },
            Q::EventAtTheTimeOfAnotherEvent => TypedCall::EventAtTheTimeOfAnotherEvent {
                anchor: a.triplet("anchor")?,
                anchor_point: a.endpoint("anchor_point")?,
                pattern: a.entity_pattern()?,
            },
            Q::NumberOfEventsInTimeInterval => TypedCall::NumberOfEventsInTimeInterval {
                pattern: a.pattern()?,
                window: a.interval("window")?,
            },
            Q::RelationDuration => TypedCall::RelationDuration {
                triplet: a.bound_triplet()?,
                occurrence: a.occurrence()?,
            },
            Q::GetEntityByDuration => TypedCall::GetEntityByDuration {
                pattern: a.entity_pattern()?,
                mode: a.keyword("mode")?,
            },
            Q::FindEntitiesDuringTriplet => TypedCall::FindEntitiesDuringTriplet {
                anchor: a.triplet("anchor")?,
                pattern: a.entity_pattern()?,
            },
            Q::GetEntitiesInBetween => TypedCall::GetEntitiesInBetween {
                pattern: a.entity_pattern()?,
                from: a.entity("from")?,
                to: a.entity("to")?,
            },
            Q::CalculateTotalRelationTime => TypedCall::CalculateTotalRelationTime {
                pattern: a.pattern()?,
                simple_sum: a.opt_bool("simple_sum")?.unwrap_or(false),
            },
            Q::IsTripletWithinTimespan => TypedCall::IsTripletWithinTimespan {
                triplet: a.bound_triplet()?,
                window: a.interval("window")?,
            },
            Q::CheckIntervalWithoutRelation => {
                let min_gap = a.int("min_gap")?;
                if min_gap < 0 {
                    return Err(FuncError::arg("min_gap", "must be non-negative"));
                }
                TypedCall::CheckIntervalWithoutRelation {
                    pattern: a.pattern()?,
                    window: a.interval("window")?,
                    min_gap,
                }
            }
            Q::CompareTripletDurations => TypedCall::CompareTripletDurations {
                first: a.triplet("first")?,
                second: a.triplet("second")?,
                comparison: a.keyword("comparison")?,
            },
            Q::SequenceOfRelationsInInterval => TypedCall::SequenceOfRelationsInInterval {
                subject: a.opt_entity("subject")?,
                sequence: a.sequence("sequence")?,
                window: a.interval("window")?,
            },
            Q::CountRelationsWithDuration => TypedCall::CountRelationsWithDuration {
                pattern: a.pattern()?,
                predicate: DurationPredicate::new(a.comparator("comparator")?, a.int("threshold")?),
                window: a.interval("window")?,
            },
        };
        Ok(typed)
    }
}

fn slot<T: AsRef<str>>(v: Option<T>) -> Value {
    match v {
        Some(x) => json!(x.as_ref()),
        None => json!("?"),
    }
}

fn triplet_json(t: &Triplet) -> Value {
    json!([t.subject.as_str(), t.relation.as_str(), t.object.as_str()])
}

fn interval_json(iv: &Interval) -> Value {
    json!([iv.start(), iv.end()])
}

pub(crate) fn endpoint_str(e: Endpoint) -> &'static str {
    match e {
        Endpoint::Start => "start",
        Endpoint::End => "end",
    }
}

// ---------------------------------------------------------------------------
// argument decoding

struct Args<'a> {
    map: &'a IndexMap<String, Value>,
    params: &'static [ParamSpec],
}

fn is_wildcard(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::String(s) => matches!(s.trim(), "?" | "*"),
        _ => false,
    }
}

fn id_text<'v>(name: &str, v: &'v Value) -> Result<&'v str, FuncError> {
    v.as_str()
        .map(str::trim)
        .ok_or_else(|| FuncError::arg(name, format!("expected an identifier string, got {v}")))
}

fn int_value(name: &str, v: &Value) -> Result<i64, FuncError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .or_else(|| {
                n.as_f64()
                    .filter(|f| f.fract() == 0.0 && f.abs() < 9e15)
                    .map(|f| f as i64)
            })
            .ok_or_else(|| FuncError::arg(name, format!("expected an integer, got {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| FuncError::arg(name, format!("expected an integer, got `{s}`"))),
        other => Err(FuncError::arg(
            name,
            format!("expected an integer, got {other}"),
        )),
    }
}

impl Args<'_> {
    fn get(&self, name: &str) -> Option<&Value> {
        debug_assert!(
            self.params.iter().any(|p| p.name == name),
            "undeclared parameter {name}"
        );
        self.map.get(name)
    }

    fn required(&self, name: &str) -> Result<&Value, FuncError> {
        self.get(name)
            .ok_or_else(|| FuncError::arg(name, "missing required parameter"))
    }

    fn opt_entity(&self, name: &str) -> Result<Option<EntityId>, FuncError> {
        match self.get(name) {
            None => Ok(None),
            Some(v) if is_wildcard(v) => Ok(None),
            Some(v) => EntityId::new(id_text(name, v)?)
                .map(Some)
                .map_err(|e| FuncError::arg(name, e.to_string())),
        }
    }

    fn opt_relation(&self, name: &str) -> Result<Option<RelationId>, FuncError> {
        match self.get(name) {
            None => Ok(None),
            Some(v) if is_wildcard(v) => Ok(None),
            Some(v) => RelationId::new(id_text(name, v)?)
                .map(Some)
                .map_err(|e| FuncError::arg(name, e.to_string())),
        }
    }

    fn entity(&self, name: &str) -> Result<EntityId, FuncError> {
        self.required(name)?;
        self.opt_entity(name)?
            .ok_or_else(|| FuncError::arg(name, "a concrete entity is required, not a wildcard"))
    }

    fn relation(&self, name: &str) -> Result<RelationId, FuncError> {
        self.required(name)?;
        self.opt_relation(name)?
            .ok_or_else(|| FuncError::arg(name, "a concrete relation is required, not a wildcard"))
    }

    fn pattern(&self) -> Result<QueryPattern, FuncError> {
        Ok(QueryPattern::new(
            self.opt_entity("subject")?,
            self.opt_relation("relation")?,
            self.opt_entity("object")?,
        ))
    }

    /// Pattern whose single wildcard sits at the subject or object position.
    fn entity_pattern(&self) -> Result<QueryPattern, FuncError> {
        let p = self.pattern()?;
        if p.relation.is_none() || p.wildcard_count() != 1 {
            return Err(FuncError::arg(
                "subject",
                "exactly one of subject/object must be a wildcard and relation must be bound",
            ));
        }
        Ok(p)
    }

    fn bound_triplet(&self) -> Result<Triplet, FuncError> {
        Ok(Triplet::new(
            self.entity("subject")?,
            self.relation("relation")?,
            self.entity("object")?,
        ))
    }

    fn triplet(&self, name: &str) -> Result<Triplet, FuncError> {
        let v = self.required(name)?;
        let (s, r, o) = match v {
            Value::Array(items) if items.len() == 3 => (&items[0], &items[1], &items[2]),
            Value::Object(m) => match (m.get("subject"), m.get("relation"), m.get("object")) {
                (Some(s), Some(r), Some(o)) if m.len() == 3 => (s, r, o),
                _ => {
                    return Err(FuncError::arg(
                        name,
                        "triplet object needs exactly subject, relation, object",
                    ))
                }
            },
            other => {
                return Err(FuncError::arg(
                    name,
                    format!("expected [subject, relation, object], got {other}"),
                ))
            }
        };
        if [s, r, o].into_iter().any(is_wildcard) {
            return Err(FuncError::arg(name, "triplet fields must all be bound"));
        }
        let bad = |e: crate::tkg::IdError| FuncError::arg(name, e.to_string());
        Ok(Triplet::new(
            EntityId::new(id_text(name, s)?).map_err(bad)?,
            RelationId::new(id_text(name, r)?).map_err(bad)?,
            EntityId::new(id_text(name, o)?).map_err(bad)?,
        ))
    }

    fn int(&self, name: &str) -> Result<i64, FuncError> {
        int_value(name, self.required(name)?)
    }

    fn occurrence(&self) -> Result<Option<usize>, FuncError> {
        match self.get("occurrence") {
            None | Some(Value::Null) => Ok(None),
            Some(v) => {
                let k = int_value("occurrence", v)?;
                if k < 1 {
                    return Err(FuncError::arg("occurrence", "occurrence is 1-based"));
                }
                usize::try_from(k)
                    .map(Some)
                    .map_err(|_| FuncError::arg("occurrence", "too large"))
            }
        }
    }

    fn interval(&self, name: &str) -> Result<Interval, FuncError> {
        let v = self.required(name)?;
        let (a, b) = match v {
            Value::Array(items) if items.len() == 2 => {
                (int_value(name, &items[0])?, int_value(name, &items[1])?)
            }
            Value::Object(m) => match (m.get("start"), m.get("end")) {
                (Some(a), Some(b)) if m.len() == 2 => (int_value(name, a)?, int_value(name, b)?),
                _ => {
                    return Err(FuncError::arg(
                        name,
                        "interval object needs exactly start and end",
                    ))
                }
            },
            other => {
                return Err(FuncError::arg(
                    name,
                    format!("expected [start, end], got {other}"),
                ))
            }
        };
        Interval::new(a, b).map_err(|e| FuncError::arg(name, e.to_string()))
    }

    fn keyword<T: FromStr<Err = String>>(&self, name: &str) -> Result<T, FuncError> {
        let v = self.required(name)?;
        v.as_str()
            .ok_or_else(|| FuncError::arg(name, format!("expected a keyword string, got {v}")))?
            .parse()
            .map_err(|e: String| FuncError::arg(name, e))
    }

    fn endpoint(&self, name: &str) -> Result<Endpoint, FuncError> {
        let v = self.required(name)?;
        parse_endpoint(v)
            .ok_or_else(|| FuncError::arg(name, format!("expected \"start\" or \"end\", got {v}")))
    }

    fn comparator(&self, name: &str) -> Result<Comparator, FuncError> {
        let v = self.required(name)?;
        v.as_str()
            .ok_or_else(|| FuncError::arg(name, "expected a comparator string"))?
            .parse()
            .map_err(|e: crate::primitives::UnknownComparator| FuncError::arg(name, e.to_string()))
    }

    fn opt_bool(&self, name: &str) -> Result<Option<bool>, FuncError> {
        match self.get(name) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(*b)),
            Some(other) => Err(FuncError::arg(
                name,
                format!("expected a boolean, got {other}"),
            )),
        }
    }

    fn sequence(&self, name: &str) -> Result<Vec<(RelationId, Endpoint)>, FuncError> {
        let Value::Array(items) = self.required(name)? else {
            return Err(FuncError::arg(
                name,
                "expected a list of [relation, start|end] pairs",
            ));
        };
        items
            .iter()
            .map(|item| {
                let (r, e) = match item {
                    Value::Array(pair) if pair.len() == 2 => (&pair[0], &pair[1]),
                    Value::Object(m) => match (m.get("relation"), m.get("endpoint")) {
                        (Some(r), Some(e)) if m.len() == 2 => (r, e),
                        _ => {
                            return Err(FuncError::arg(
                                name,
                                "step object needs exactly relation and endpoint",
                            ))
                        }
                    },
                    other => {
                        return Err(FuncError::arg(name, format!("bad sequence step {other}")))
                    }
                };
                if is_wildcard(r) {
                    return Err(FuncError::arg(name, "sequence relations must be bound"));
                }
                let rel = RelationId::new(id_text(name, r)?)
                    .map_err(|e| FuncError::arg(name, e.to_string()))?;
                let ep = parse_endpoint(e)
                    .ok_or_else(|| FuncError::arg(name, format!("bad endpoint {e}")))?;
                Ok((rel, ep))
            })
            .collect()
    }
}

fn parse_endpoint(v: &Value) -> Option<Endpoint> {
    match v.as_str()?.trim().to_ascii_lowercase().as_str() {
        "start" => Some(Endpoint::Start),
        "end" => Some(Endpoint::End),
        _ => None,
    }
}
