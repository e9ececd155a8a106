//! LLM-facing descriptions, worked examples and parameter guides, and the
//! JSON schema bundle built from them. Nothing here references solver logic.

use serde::{Deserialize, Serialize};

use super::QuestionType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    EntityOrWildcard,
    RelationOrWildcard,
    Entity,
    Relation,
    Integer,
    Interval,
    Triplet,
    Enum,
    Boolean,
    RelationSequence,
    Comparator,
}

impl ParamKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ParamKind::EntityOrWildcard => "entity_or_wildcard",
            ParamKind::RelationOrWildcard => "relation_or_wildcard",
            ParamKind::Entity => "entity",
            ParamKind::Relation => "relation",
            ParamKind::Integer => "integer",
            ParamKind::Interval => "interval",
            ParamKind::Triplet => "triplet",
            ParamKind::Enum => "enum",
            ParamKind::Boolean => "boolean",
            ParamKind::RelationSequence => "relation_sequence",
            ParamKind::Comparator => "comparator",
        }
    }
}

/// One entry of a function's use guide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub required: bool,
    pub description: &'static str,
    pub values: &'static [&'static str],
}

const fn p(
    name: &'static str,
    kind: ParamKind,
    required: bool,
    description: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required,
        description,
        values: &[],
    }
}

const fn e(
    name: &'static str,
    values: &'static [&'static str],
    required: bool,
    description: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind: ParamKind::Enum,
        required,
        description,
        values,
    }
}

use ParamKind as K;

const SUBJ_SLOT: ParamSpec = p(
    "subject",
    K::EntityOrWildcard,
    false,
    "Subject entity id, or \"?\" when the subject is what the question asks for.",
);
const REL_BOUND: ParamSpec = p("relation", K::Relation, true, "Relation id, e.g. \"R3\".");
const OBJ_SLOT: ParamSpec = p(
    "object",
    K::EntityOrWildcard,
    false,
    "Object entity id, or \"?\" when the object is what the question asks for.",
);
const SUBJ_ANY: ParamSpec = p(
    "subject",
    K::EntityOrWildcard,
    false,
    "Subject entity id, or \"?\" to match any subject.",
);
const REL_ANY: ParamSpec = p(
    "relation",
    K::RelationOrWildcard,
    false,
    "Relation id, or \"?\" to match any relation.",
);
const OBJ_ANY: ParamSpec = p(
    "object",
    K::EntityOrWildcard,
    false,
    "Object entity id, or \"?\" to match any object.",
);
const SUBJ: ParamSpec = p("subject", K::Entity, true, "Subject entity id.");
const REL: ParamSpec = p("relation", K::Relation, true, "Relation id.");
const OBJ: ParamSpec = p("object", K::Entity, true, "Object entity id.");
const WINDOW: ParamSpec = p(
    "window",
    K::Interval,
    true,
    "Closed time window [start, end] in years, e.g. [1980, 2010].",
);
const OCCURRENCE: ParamSpec = p(
    "occurrence",
    K::Integer,
    false,
    "Which episode to use when the triplet held several times, counting from 1 in chronological order.",
);
const ANCHOR: ParamSpec = p(
    "anchor",
    K::Triplet,
    true,
    "Reference fact as [subject, relation, object]; it must have a single episode.",
);

static TIMELINE: [ParamSpec; 3] = [SUBJ_SLOT, REL_BOUND, OBJ_SLOT];
static BEFORE_AFTER: [ParamSpec; 5] = [
    SUBJ_SLOT,
    REL_BOUND,
    OBJ_SLOT,
    p("pivot", K::Entity, true, "Entity whose episode is the reference point."),
    e(
        "direction",
        &["before", "after"],
        true,
        "\"before\" for the entity just preceding the pivot, \"after\" for the one just following it.",
    ),
];
static EVENT_AT_TIME_T: [ParamSpec; 4] = [
    SUBJ_SLOT,
    REL_BOUND,
    OBJ_SLOT,
    p("time", K::Integer, true, "Year to look at."),
];
static EVENT_AT_WHAT_TIME: [ParamSpec; 5] = [
    SUBJ,
    REL,
    OBJ,
    e(
        "endpoint",
        &["start", "end", "interval"],
        true,
        "\"start\" for the year it began, \"end\" for the year it ended, \"interval\" for both.",
    ),
    OCCURRENCE,
];
static FIRST_LAST: [ParamSpec; 4] = [
    SUBJ_SLOT,
    REL_BOUND,
    OBJ_SLOT,
    e(
        "which",
        &["first", "last"],
        true,
        "\"first\" for the earliest start, \"last\" for the latest start.",
    ),
];
static EVENT_AT_THE_TIME_OF_ANOTHER_EVENT: [ParamSpec; 5] = [
    ANCHOR,
    e(
        "anchor_point",
        &["start", "end"],
        true,
        "Use the year the anchor started (\"start\") or ended (\"end\").",
    ),
    SUBJ_SLOT,
    REL_BOUND,
    OBJ_SLOT,
];
static NUMBER_OF_EVENTS_IN_TIME_INTERVAL: [ParamSpec; 4] = [SUBJ_ANY, REL_ANY, OBJ_ANY, WINDOW];
static RELATION_DURATION: [ParamSpec; 4] = [SUBJ, REL, OBJ, OCCURRENCE];
static GET_ENTITY_BY_DURATION: [ParamSpec; 4] = [
    SUBJ_SLOT,
    REL_BOUND,
    OBJ_SLOT,
    e(
        "mode",
        &["longest", "shortest"],
        true,
        "Pick the longest or the shortest episode.",
    ),
];
static FIND_ENTITIES_DURING_TRIPLET: [ParamSpec; 4] = [ANCHOR, SUBJ_SLOT, REL_BOUND, OBJ_SLOT];
static GET_ENTITIES_IN_BETWEEN: [ParamSpec; 5] = [
    SUBJ_SLOT,
    REL_BOUND,
    OBJ_SLOT,
    p(
        "from",
        K::Entity,
        true,
        "Entity whose first episode opens the range.",
    ),
    p(
        "to",
        K::Entity,
        true,
        "Entity whose first episode closes the range.",
    ),
];
static CALCULATE_TOTAL_RELATION_TIME: [ParamSpec; 4] = [
    SUBJ_ANY,
    REL_ANY,
    OBJ_ANY,
    p(
        "simple_sum",
        K::Boolean,
        false,
        "When true, add up episode durations without merging overlaps. Defaults to false.",
    ),
];
static IS_TRIPLET_WITHIN_TIMESPAN: [ParamSpec; 4] = [SUBJ, REL, OBJ, WINDOW];
static CHECK_INTERVAL_WITHOUT_RELATION: [ParamSpec; 5] = [
    SUBJ_ANY,
    REL_ANY,
    OBJ_ANY,
    WINDOW,
    p(
        "min_gap",
        K::Integer,
        true,
        "Number of years the pause must strictly exceed (non-negative).",
    ),
];
static COMPARE_TRIPLET_DURATIONS: [ParamSpec; 3] = [
    p(
        "first",
        K::Triplet,
        true,
        "First relation as [subject, relation, object].",
    ),
    p(
        "second",
        K::Triplet,
        true,
        "Second relation as [subject, relation, object].",
    ),
    e(
        "comparison",
        &["longer", "shorter"],
        true,
        "Ask whether the first lasted longer or shorter than the second.",
    ),
];
static SEQUENCE_OF_RELATIONS_IN_INTERVAL: [ParamSpec; 3] = [
    p(
        "subject",
        K::EntityOrWildcard,
        false,
        "Entity the events are about, or \"?\" to allow any subject.",
    ),
    p(
        "sequence",
        K::RelationSequence,
        true,
        "Ordered list of [relation, \"start\"|\"end\"] steps, e.g. [[\"R2\", \"start\"], [\"R2\", \"end\"]].",
    ),
    WINDOW,
];
static COUNT_RELATIONS_WITH_DURATION: [ParamSpec; 6] = [
    SUBJ_ANY,
    REL_ANY,
    OBJ_ANY,
    p(
        "comparator",
        K::Comparator,
        true,
        "One of \"<\", \"<=\", \"=\", \">=\", \">\".",
    ),
    p(
        "threshold",
        K::Integer,
        true,
        "Duration in years to compare against.",
    ),
    WINDOW,
];

pub fn params_for(q: QuestionType) -> &'static [ParamSpec] {
    use QuestionType as Q;
    match q {
        Q::Timeline => &TIMELINE,
        Q::BeforeAfter => &BEFORE_AFTER,
        Q::EventAtTimeT => &EVENT_AT_TIME_T,
        Q::EventAtWhatTime => &EVENT_AT_WHAT_TIME,
        Q::FirstLast => &FIRST_LAST,
        Q::EventAtTheTimeOfAnotherEvent => &EVENT_AT_THE_TIME_OF_ANOTHER_EVENT,
        Q::NumberOfEventsInTimeInterval => &NUMBER_OF_EVENTS_IN_TIME_INTERVAL,
        Q::RelationDuration => &RELATION_DURATION,
        Q::GetEntityByDuration => &GET_ENTITY_BY_DURATION,
        Q::FindEntitiesDuringTriplet => &FIND_ENTITIES_DURING_TRIPLET,
        Q::GetEntitiesInBetween => &GET_ENTITIES_IN_BETWEEN,
        Q::CalculateTotalRelationTime => &CALCULATE_TOTAL_RELATION_TIME,
        Q::IsTripletWithinTimespan => &IS_TRIPLET_WITHIN_TIMESPAN,
        Q::CheckIntervalWithoutRelation => &CHECK_INTERVAL_WITHOUT_RELATION,
        Q::CompareTripletDurations => &COMPARE_TRIPLET_DURATIONS,
        Q::SequenceOfRelationsInInterval => &SEQUENCE_OF_RELATIONS_IN_INTERVAL,
        Q::CountRelationsWithDuration => &COUNT_RELATIONS_WITH_DURATION,
    }
}

// ---------------------------------------------------------------------------
// descriptions and worked examples

pub type ExampleFact = (&'static str, &'static str, &'static str, i64, i64);

#[derive(Debug, Clone, Copy)]
pub struct ExampleSpec {
    pub question: &'static str,
    pub facts: &'static [ExampleFact],
    /// JSON object of arguments.
    pub arguments: &'static str,
    /// Plain JSON answer.
    pub result: &'static str,
}

const EX_FACTS: &[ExampleFact] = &[
    ("E1", "R1", "E2", 2000, 2005),
    ("E1", "R1", "E3", 2006, 2010),
    ("E1", "R1", "E4", 2012, 2020),
    ("E5", "R1", "E2", 2001, 2003),
    ("E1", "R2", "E6", 2004, 2008),
    ("E7", "R1", "E2", 2003, 2012),
];

const TWICE: &[ExampleFact] = &[
    ("E8", "R3", "E9", 1990, 1994),
    ("E8", "R3", "E9", 1999, 2001),
];

pub fn description(q: QuestionType) -> &'static str {
    use QuestionType as Q;
    match q {
        Q::Timeline => "Lists, in chronological order of start year, the entities at the wildcard position of every fact matching the pattern. An entity appears once per episode, so repeated relations produce repeated entries. Answers questions such as \"List, in order, every entity that held R1 with E2\".",
        Q::BeforeAfter => "Sorts the facts matching the pattern by start year and returns the entity of the fact immediately before or after the pivot entity's first episode. Answers questions such as \"Which entity did E1 hold R1 with right before E3?\".",
        Q::EventAtTimeT => "Returns the entities at the wildcard position of the matching facts that hold at the given year (start <= year <= end), without duplicates, ordered by start year. Answers questions such as \"Who held R1 with E2 in 2002?\".",
        Q::EventAtWhatTime => "Returns when a fully specified fact held: its start year, its end year, or the whole [start, end] interval. If the triplet held several times, give the occurrence to choose one. Answers questions such as \"When did E1 stop holding R1 with E3?\".",
        Q::FirstLast => "Sorts the facts matching the pattern by start year and returns the entity of the earliest (first) or latest (last) one. Answers questions such as \"Which entity was the first to hold R1 with E2?\".",
        Q::EventAtTheTimeOfAnotherEvent => "Takes the start or end year of an anchor fact and returns the entities at the wildcard position of the pattern facts that hold at that year, ordered by start year. Answers questions such as \"When E1 began R1 with E3, with which entity did E1 hold R2?\".",
        Q::NumberOfEventsInTimeInterval => "Counts the facts matching the pattern whose whole interval lies inside the window (window start <= start and end <= window end). Answers questions such as \"How many times did E1 hold R1 between 2000 and 2011?\".",
        Q::RelationDuration => "Returns the duration in years (end - start) of a fully specified fact. If the triplet held several times, give the occurrence to choose one. Answers questions such as \"How long did E8 hold R3 with E9 the second time?\".",
        Q::GetEntityByDuration => "Returns the entity at the wildcard position of the matching fact with the longest or shortest duration (end - start). Ties go to the earliest start. Answers questions such as \"With which entity did E1 hold R1 for the longest time?\".",
        Q::FindEntitiesDuringTriplet => "Returns the entities at the wildcard position of the pattern facts whose interval overlaps the anchor fact's interval, excluding the anchor fact itself, without duplicates and ordered by start year. Answers questions such as \"Which entities held R1 with E2 while E1 held R1 with E2?\".",
        Q::GetEntitiesInBetween => "Sorts the facts matching the pattern by start year and returns the wildcard entities whose start lies strictly between the start of the `from` entity's first episode and the start of the `to` entity's first episode. Answers questions such as \"Between E2 and E4, which other entities did E1 hold R1 with?\".",
        Q::CalculateTotalRelationTime => "Returns the total time in years covered by the facts matching the pattern. Overlapping or touching episodes are merged first, so shared years are counted once; set simple_sum to add raw durations instead. Answers questions such as \"For how many years in total did E1 hold R1?\".",
        Q::IsTripletWithinTimespan => "Returns true when at least one episode of the fully specified fact lies entirely inside the window. Answers questions such as \"Did E1 hold R1 with E2 entirely between 1999 and 2006?\".",
        Q::CheckIntervalWithoutRelation => "Clips the matching facts to the window, merges them and measures every pause, including the stretch from the window start to the first fact and from the last fact to the window end. Returns true when some pause is strictly longer than min_gap years. Answers questions such as \"Was E1 without R1 for more than 1 year between 2000 and 2020?\".",
        Q::CompareTripletDurations => "Compares the total merged durations of two fully specified relations. Returns true only when the first is strictly longer (or strictly shorter) than the second; equal totals give false. Answers questions such as \"Did E1 hold R1 with E2 for longer than with E4?\".",
        Q::SequenceOfRelationsInInterval => "Checks whether the subject has facts producing the listed events (a relation's start or end) in the given order, with non-decreasing years all inside the window. Different steps may use the same fact. Answers questions such as \"Did E1 start R2 and then end R1 between 2004 and 2006?\".",
        Q::CountRelationsWithDuration => "Counts the matching facts that overlap the window and whose duration (end - start) satisfies the comparison with the threshold. Answers questions such as \"How many times did E1 hold R1 for at least 5 years between 2000 and 2020?\".",
    }
}

pub fn examples(q: QuestionType) -> &'static [ExampleSpec] {
    use QuestionType as Q;
    match q {
        Q::Timeline => &[
            ExampleSpec {
                question: "List, in order, the entities E1 held relation R1 with.",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?"}"#,
                result: r#"["E2","E3","E4"]"#,
            },
            ExampleSpec {
                question: "List chronologically the entities that held R1 with E2.",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2"}"#,
                result: r#"["E1","E5","E7"]"#,
            },
        ],
        Q::BeforeAfter => &[
            ExampleSpec {
                question: "Which entity did E1 hold R1 with right before E3?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","pivot":"E3","direction":"before"}"#,
                result: r#""E2""#,
            },
            ExampleSpec {
                question: "After E3, with which entity did E1 hold R1 next?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","pivot":"E3","direction":"after"}"#,
                result: r#""E4""#,
            },
        ],
        Q::EventAtTimeT => &[
            ExampleSpec {
                question: "Which entities held R1 with E2 in 2002?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2","time":2002}"#,
                result: r#"["E1","E5"]"#,
            },
            ExampleSpec {
                question: "Who held R1 with E2 in 2010?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2","time":2010}"#,
                result: r#"["E7"]"#,
            },
        ],
        Q::EventAtWhatTime => &[
            ExampleSpec {
                question: "During which years did E1 hold R1 with E3?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"E3","endpoint":"interval"}"#,
                result: "[2006,2010]",
            },
            ExampleSpec {
                question: "When did E8 start R3 with E9 for the second time?",
                facts: TWICE,
                arguments: r#"{"subject":"E8","relation":"R3","object":"E9","endpoint":"start","occurrence":2}"#,
                result: "1999",
            },
        ],
        Q::FirstLast => &[
            ExampleSpec {
                question: "Which entity was the first to hold R1 with E2?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2","which":"first"}"#,
                result: r#""E1""#,
            },
            ExampleSpec {
                question: "What was the last entity E1 held R1 with?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","which":"last"}"#,
                result: r#""E4""#,
            },
        ],
        Q::EventAtTheTimeOfAnotherEvent => &[ExampleSpec {
            question: "When E1 began R1 with E3, with which entity did E1 hold R2?",
            facts: EX_FACTS,
            arguments: r#"{"anchor":["E1","R1","E3"],"anchor_point":"start","subject":"E1","relation":"R2","object":"?"}"#,
            result: r#"["E6"]"#,
        }],
        Q::NumberOfEventsInTimeInterval => &[
            ExampleSpec {
                question: "How many times did E1 hold R1 between 2000 and 2011?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","window":[2000,2011]}"#,
                result: "2",
            },
            ExampleSpec {
                question: "How many R1 facts about E2 fall between 1900 and 2100?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2","window":[1900,2100]}"#,
                result: "3",
            },
        ],
        Q::RelationDuration => &[
            ExampleSpec {
                question: "How long did E1 hold R1 with E3?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"E3"}"#,
                result: "4",
            },
            ExampleSpec {
                question: "How long did E8 hold R3 with E9 the second time?",
                facts: TWICE,
                arguments: r#"{"subject":"E8","relation":"R3","object":"E9","occurrence":2}"#,
                result: "2",
            },
        ],
        Q::GetEntityByDuration => &[
            ExampleSpec {
                question: "With which entity did E1 hold R1 for the longest time?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","mode":"longest"}"#,
                result: r#""E4""#,
            },
            ExampleSpec {
                question: "Whose R1 relation with E2 was the shortest?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2","mode":"shortest"}"#,
                result: r#""E5""#,
            },
        ],
        Q::FindEntitiesDuringTriplet => &[
            ExampleSpec {
                question: "Which entities held R1 with E2 while E1 held R1 with E2?",
                facts: EX_FACTS,
                arguments: r#"{"anchor":["E1","R1","E2"],"subject":"?","relation":"R1","object":"E2"}"#,
                result: r#"["E5","E7"]"#,
            },
            ExampleSpec {
                question: "While E1 held R1 with E4, who held R1 with E2?",
                facts: EX_FACTS,
                arguments: r#"{"anchor":["E1","R1","E4"],"subject":"?","relation":"R1","object":"E2"}"#,
                result: r#"["E7"]"#,
            },
        ],
        Q::GetEntitiesInBetween => &[ExampleSpec {
            question: "Between E2 and E4, which other entities did E1 hold R1 with?",
            facts: EX_FACTS,
            arguments: r#"{"subject":"E1","relation":"R1","object":"?","from":"E2","to":"E4"}"#,
            result: r#"["E3"]"#,
        }],
        Q::CalculateTotalRelationTime => &[
            ExampleSpec {
                question: "For how many years in total did E1 hold R1?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?"}"#,
                result: "17",
            },
            ExampleSpec {
                question: "For how long was some entity holding R1 with E2?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"?","relation":"R1","object":"E2"}"#,
                result: "12",
            },
        ],
        Q::IsTripletWithinTimespan => &[
            ExampleSpec {
                question: "Did E1 hold R1 with E2 entirely between 1999 and 2006?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"E2","window":[1999,2006]}"#,
                result: "true",
            },
            ExampleSpec {
                question: "Did E1 hold R1 with E2 within 2001 and 2006?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"E2","window":[2001,2006]}"#,
                result: "false",
            },
        ],
        Q::CheckIntervalWithoutRelation => &[
            ExampleSpec {
                question: "Was E1 without R1 for more than 1 year between 2000 and 2020?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","window":[2000,2020],"min_gap":1}"#,
                result: "true",
            },
            ExampleSpec {
                question: "Was E1 without R1 for more than 2 years between 2000 and 2020?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","window":[2000,2020],"min_gap":2}"#,
                result: "false",
            },
        ],
        Q::CompareTripletDurations => &[ExampleSpec {
            question: "Did E1 hold R1 with E2 for longer than with E4?",
            facts: EX_FACTS,
            arguments: r#"{"first":["E1","R1","E2"],"second":["E1","R1","E4"],"comparison":"longer"}"#,
            result: "false",
        }],
        Q::SequenceOfRelationsInInterval => &[
            ExampleSpec {
                question: "Did E1 start R2 and then end R1 between 2004 and 2006?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","sequence":[["R2","start"],["R1","end"]],"window":[2004,2006]}"#,
                result: "true",
            },
            ExampleSpec {
                question: "Did E1 end R1 and afterwards start R2, all between 2004 and 2005?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","sequence":[["R1","end"],["R2","start"]],"window":[2004,2005]}"#,
                result: "false",
            },
        ],
        Q::CountRelationsWithDuration => &[
            ExampleSpec {
                question:
                    "How many times did E1 hold R1 for at least 4 years between 2000 and 2020?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","comparator":">=","threshold":4,"window":[2000,2020]}"#,
                result: "3",
            },
            ExampleSpec {
                question:
                    "How many R1 episodes of E1 lasted more than 5 years between 2000 and 2020?",
                facts: EX_FACTS,
                arguments: r#"{"subject":"E1","relation":"R1","object":"?","comparator":">","threshold":5,"window":[2000,2020]}"#,
                result: "1",
            },
        ],
    }
}

// ---------------------------------------------------------------------------
// bundle document

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaExample {
    pub question: String,
    pub facts: Vec<String>,
    pub call: serde_json::Value,
    pub result: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaParameter {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub description: String,
    pub required: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaEntry {
    pub name: String,
    pub description: String,
    pub examples: Vec<SchemaExample>,
    pub parameters: Vec<SchemaParameter>,
    pub returns: String,
}

pub fn schema_entry(q: QuestionType) -> SchemaEntry {
    let examples = examples(q)
        .iter()
        .map(|ex| SchemaExample {
            question: ex.question.to_string(),
            facts: ex
                .facts
                .iter()
                .map(|(s, r, o, t0, t1)| format!("({s}, {r}, {o}, {t0}, {t1})"))
                .collect(),
            call: serde_json::json!({
                "function": q.name(),
                "arguments": serde_json::from_str::<serde_json::Value>(ex.arguments)
                    .expect("example arguments are valid JSON"),
            }),
            result: serde_json::from_str(ex.result).expect("example results are valid JSON"),
        })
        .collect();
    let parameters = params_for(q)
        .iter()
        .map(|p| SchemaParameter {
            name: p.name.to_string(),
            kind: p.kind.tag().to_string(),
            description: p.description.to_string(),
            required: p.required,
            values: p.values.iter().map(|v| v.to_string()).collect(),
        })
        .collect();
    let returns = match q {
        QuestionType::EventAtWhatTime => "time_point or time_interval".to_string(),
        other => other.answer_type().as_str().to_string(),
    };
    SchemaEntry {
        name: q.name().to_string(),
        description: description(q).to_string(),
        examples,
        parameters,
        returns,
    }
}

/// Schema entries for all 17 functions in registry order.
pub fn schema_entries() -> Vec<SchemaEntry> {
    QuestionType::ALL.iter().map(|q| schema_entry(*q)).collect()
}

/// The JSON document shown to an LLM.
pub fn schema_bundle() -> String {
    serde_json::to_string_pretty(&schema_entries()).expect("schema entries always serialize")
}

pub fn parse_bundle(text: &str) -> Result<Vec<SchemaEntry>, serde_json::Error> {
    serde_json::from_str(text)
}
