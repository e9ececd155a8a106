//! The 17 temporal solver functions.
//!
//! Each function is a [`FunctionSpec`]: executable logic, a description with
//! worked examples, and a per-parameter use guide. Only the latter two are
//! ever shown to a model, through [`schema_bundle`].
//!
//! ```
//! use tempqa_core::funcset::{dispatch, FunctionCall};
//! use tempqa_core::tkg::Tkg;
//! use serde_json::json;
//!
//! let g = Tkg::load(r#"{"s":"E1","r":"R1","o":"E2","t0":2000,"t1":2005}"#.as_bytes()).unwrap();
//! let call = FunctionCall::new("relation_duration")
//!     .arg("subject", json!("E1"))
//!     .arg("relation", json!("R1"))
//!     .arg("object", json!("E2"));
//! assert_eq!(dispatch(&g, &call).unwrap().to_string(), "5");
//! ```

mod call;
mod schema;
mod solvers;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::answer::{AnswerType, AnswerValue};
use crate::tkg::Tkg;

pub use call::{
    Comparison, Direction, DurationMode, FunctionCall, TimeEndpoint, Triplet, TypedCall, Which,
};
pub use schema::{
    description, examples, params_for, parse_bundle, schema_bundle, schema_entries, schema_entry,
    ExampleSpec, ParamKind, ParamSpec, SchemaEntry, SchemaExample, SchemaParameter,
};
pub use solvers::window_gaps;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FuncError {
    #[error("no facts match the query")]
    NoMatchingFacts,
    #[error("the triplet has {count} episodes; an occurrence is needed")]
    AmbiguousEpisode { count: usize },
    #[error("occurrence {requested} requested but only {available} episodes exist")]
    OccurrenceOutOfRange { requested: usize, available: usize },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("argument `{param}`: {reason}")]
    ArgumentType { param: String, reason: String },
}

impl FuncError {
    pub(crate) fn arg(param: &str, reason: impl Into<String>) -> Self {
        FuncError::ArgumentType {
            param: param.to_string(),
            reason: reason.into(),
        }
    }
}

macro_rules! question_types {
    ($($variant:ident => $name:literal : $answer:ident),+ $(,)?) => {
        /// The 17 question types, one per solver function.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum QuestionType {
            $(#[serde(rename = $name)] $variant),+
        }

        impl QuestionType {
            pub const ALL: [QuestionType; 17] = [$(QuestionType::$variant),+];

            /// Function name, identical to the question type tag.
            pub fn name(&self) -> &'static str {
                match self {
                    $(QuestionType::$variant => $name),+
                }
            }

            /// Default answer type. `event_at_what_time` may also answer with
            /// an interval; see [`TypedCall::answer_type`].
            pub fn answer_type(&self) -> AnswerType {
                match self {
                    $(QuestionType::$variant => AnswerType::$answer),+
                }
            }
        }

        impl FromStr for QuestionType {
            type Err = FuncError;
            fn from_str(s: &str) -> Result<Self, FuncError> {
                match s.trim() {
                    $($name => Ok(QuestionType::$variant),)+
                    other => Err(FuncError::UnknownFunction(other.to_string())),
                }
            }
        }
    };
}

question_types! {
    Timeline => "timeline": EntityList,
    BeforeAfter => "before_after": Entity,
    EventAtTimeT => "event_at_time_t": EntityList,
    EventAtWhatTime => "event_at_what_time": TimePoint,
    FirstLast => "first_last": Entity,
    EventAtTheTimeOfAnotherEvent => "event_at_the_time_of_another_event": EntityList,
    NumberOfEventsInTimeInterval => "number_of_events_in_time_interval": Count,
    RelationDuration => "relation_duration": Duration,
    GetEntityByDuration => "get_entity_by_duration": Entity,
    FindEntitiesDuringTriplet => "find_entities_during_triplet": EntityList,
    GetEntitiesInBetween => "get_entities_in_between": EntityList,
    CalculateTotalRelationTime => "calculate_total_relation_time": Duration,
    IsTripletWithinTimespan => "is_triplet_within_timespan": Boolean,
    CheckIntervalWithoutRelation => "check_interval_without_relation": Boolean,
    CompareTripletDurations => "compare_triplet_durations": Boolean,
    SequenceOfRelationsInInterval => "sequence_of_relations_in_interval": Boolean,
    CountRelationsWithDuration => "count_relations_with_duration": Count,
}

impl QuestionType {
    /// Whether list answers of this type are compared in order.
    pub fn ordered_answer(&self) -> bool {
        matches!(
            self,
            QuestionType::Timeline | QuestionType::GetEntitiesInBetween
        )
    }

    pub fn spec(&self) -> &'static FunctionSpec {
        &REGISTRY[*self as usize]
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------------------

pub type Logic = fn(&Tkg, &TypedCall) -> Result<AnswerValue, FuncError>;

/// Logic, description and use guide of one solver.
pub struct FunctionSpec {
    pub question_type: QuestionType,
    pub logic: Logic,
}

impl FunctionSpec {
    pub fn name(&self) -> &'static str {
        self.question_type.name()
    }

    pub fn description(&self) -> &'static str {
        description(self.question_type)
    }

    pub fn examples(&self) -> &'static [ExampleSpec] {
        examples(self.question_type)
    }

    pub fn use_guide(&self) -> &'static [ParamSpec] {
        params_for(self.question_type)
    }
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name())
            .finish_non_exhaustive()
    }
}

fn mismatch(expected: QuestionType) -> FuncError {
    FuncError::UnknownFunction(format!("arguments do not belong to {expected}"))
}

macro_rules! spec {
    ($q:ident, |$g:ident, $($field:ident),*| $body:expr) => {
        FunctionSpec {
            question_type: QuestionType::$q,
            logic: |$g, call| match call {
                TypedCall::$q { $($field),* } => $body,
                _ => Err(mismatch(QuestionType::$q)),
            },
        }
    };
}

use solvers as s;

/// All 17 specs, indexed by `QuestionType as usize`.
pub static REGISTRY: [FunctionSpec; 17] = [
    spec!(Timeline, |g, pattern| s::timeline(g, pattern)),
    spec!(BeforeAfter, |g, pattern, pivot, direction| s::before_after(
        g, pattern, pivot, *direction
    )),
    spec!(EventAtTimeT, |g, pattern, time| s::event_at_time_t(
        g, pattern, *time
    )),
    spec!(EventAtWhatTime, |g, triplet, endpoint, occurrence| {
        s::event_at_what_time(g, triplet, *endpoint, *occurrence)
    }),
    spec!(FirstLast, |g, pattern, which| s::first_last(
        g, pattern, *which
    )),
    spec!(
        EventAtTheTimeOfAnotherEvent,
        |g, anchor, anchor_point, pattern| {
            s::event_at_the_time_of_another_event(g, anchor, *anchor_point, pattern)
        }
    ),
    spec!(NumberOfEventsInTimeInterval, |g, pattern, window| {
        s::number_of_events_in_time_interval(g, pattern, *window)
    }),
    spec!(RelationDuration, |g, triplet, occurrence| {
        s::relation_duration(g, triplet, *occurrence)
    }),
    spec!(GetEntityByDuration, |g, pattern, mode| {
        s::get_entity_by_duration(g, pattern, *mode)
    }),
    spec!(FindEntitiesDuringTriplet, |g, anchor, pattern| {
        s::find_entities_during_triplet(g, anchor, pattern)
    }),
    spec!(GetEntitiesInBetween, |g, pattern, from, to| {
        s::get_entities_in_between(g, pattern, from, to)
    }),
    spec!(CalculateTotalRelationTime, |g, pattern, simple_sum| {
        s::calculate_total_relation_time(g, pattern, *simple_sum)
    }),
    spec!(IsTripletWithinTimespan, |g, triplet, window| {
        s::is_triplet_within_timespan(g, triplet, *window)
    }),
    spec!(
        CheckIntervalWithoutRelation,
        |g, pattern, window, min_gap| {
            s::check_interval_without_relation(g, pattern, *window, *min_gap)
        }
    ),
    spec!(CompareTripletDurations, |g, first, second, comparison| {
        s::compare_triplet_durations(g, first, second, *comparison)
    }),
    spec!(
        SequenceOfRelationsInInterval,
        |g, subject, sequence, window| {
            s::sequence_of_relations_in_interval(g, subject.as_ref(), sequence, *window)
        }
    ),
    spec!(
        CountRelationsWithDuration,
        |g, pattern, predicate, window| {
            s::count_relations_with_duration(g, pattern, *predicate, *window)
        }
    ),
];

/// Run a checked call.
pub fn evaluate(g: &Tkg, call: &TypedCall) -> Result<AnswerValue, FuncError> {
    (call.question_type().spec().logic)(g, call)
}

/// Type-check and run a loosely typed call.
pub fn dispatch(g: &Tkg, call: &FunctionCall) -> Result<AnswerValue, FuncError> {
    evaluate(g, &TypedCall::from_call(call)?)
}
