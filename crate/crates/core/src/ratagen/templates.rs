//! Natural-language question templates, 5 to 10 per question type.
//!
//! A template belongs to one *variant* of its type. `obj` templates ask for
//! the object of `(s, r, ?)`, `subj` templates for the subject of `(?, r, o)`;
//! `full` templates take a fully bound triplet, and the three
//! `start`/`end`/`interval` variants of `event_at_what_time` choose what is
//! asked. Placeholders are written `<name>` and filled in a single pass.

use std::collections::BTreeSet;

use crate::funcset::QuestionType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuestionTemplate {
    pub question_type: QuestionType,
    pub variant: &'static str,
    pub text: &'static str,
}

impl QuestionTemplate {
    /// Stable identifier such as `timeline/2`, unique within the catalogue.
    pub fn id(&self) -> String {
        let idx = templates_for(self.question_type)
            .iter()
            .position(|t| t == self)
            .expect("template is in the catalogue");
        format!("{}/{}", self.question_type.name(), idx)
    }

    pub fn placeholders(&self) -> BTreeSet<&'static str> {
        placeholders_in(self.text)
    }
}

pub fn placeholders_in(text: &'static str) -> BTreeSet<&'static str> {
    let mut out = BTreeSet::new();
    let mut rest = text;
    while let Some(a) = rest.find('<') {
        let tail = &rest[a + 1..];
        match tail.find('>') {
            Some(b) => {
                out.insert(&tail[..b]);
                rest = &tail[b + 1..];
            }
            None => break,
        }
    }
    out
}

/// Placeholders a template of `(q, variant)` may use.
pub fn allowed_placeholders(q: QuestionType, variant: &str) -> &'static [&'static str] {
    use QuestionType as Q;
    match (q, variant) {
        (Q::Timeline | Q::CalculateTotalRelationTime, "obj") => &["s", "r"],
        (Q::Timeline | Q::CalculateTotalRelationTime, "subj") => &["r", "o"],
        (Q::BeforeAfter, "obj") => &["s", "r", "pivot", "dir"],
        (Q::BeforeAfter, "subj") => &["r", "o", "pivot", "dir"],
        (Q::EventAtTimeT, "obj") => &["s", "r", "t"],
        (Q::EventAtTimeT, "subj") => &["r", "o", "t"],
        (Q::EventAtWhatTime, _) | (Q::RelationDuration, _) => &["s", "r", "o", "occ"],
        (Q::FirstLast, "obj") => &["s", "r", "which"],
        (Q::FirstLast, "subj") => &["r", "o", "which"],
        (Q::EventAtTheTimeOfAnotherEvent, "obj") => &["as", "ar", "ao", "anchor_when", "s", "r"],
        (Q::EventAtTheTimeOfAnotherEvent, "subj") => &["as", "ar", "ao", "anchor_when", "r", "o"],
        (Q::NumberOfEventsInTimeInterval, "obj") => &["s", "r", "wa", "wb"],
        (Q::NumberOfEventsInTimeInterval, "subj") => &["r", "o", "wa", "wb"],
        (Q::GetEntityByDuration, "obj") => &["s", "r", "mode"],
        (Q::GetEntityByDuration, "subj") => &["r", "o", "mode"],
        (Q::FindEntitiesDuringTriplet, "obj") => &["as", "ar", "ao", "s", "r"],
        (Q::FindEntitiesDuringTriplet, "subj") => &["as", "ar", "ao", "r", "o"],
        (Q::GetEntitiesInBetween, "obj") => &["s", "r", "from", "to"],
        (Q::GetEntitiesInBetween, "subj") => &["r", "o", "from", "to"],
        (Q::IsTripletWithinTimespan, _) => &["s", "r", "o", "wa", "wb"],
        (Q::CheckIntervalWithoutRelation, "obj") => &["s", "r", "wa", "wb", "gap"],
        (Q::CheckIntervalWithoutRelation, "subj") => &["r", "o", "wa", "wb", "gap"],
        (Q::CompareTripletDurations, _) => &["s", "r", "o", "s2", "r2", "o2", "cmp"],
        (Q::SequenceOfRelationsInInterval, _) => &["s", "seq", "wa", "wb"],
        (Q::CountRelationsWithDuration, "obj") => &["s", "r", "op", "n", "wa", "wb"],
        (Q::CountRelationsWithDuration, "subj") => &["r", "o", "op", "n", "wa", "wb"],
        _ => &[],
    }
}

macro_rules! t {
    ($q:ident, $v:literal, $text:literal) => {
        QuestionTemplate {
            question_type: QuestionType::$q,
            variant: $v,
            text: $text,
        }
    };
}

static TIMELINE: &[QuestionTemplate] = &[
    t!(Timeline, "obj", "List, in chronological order, every entity that <s> had relation <r> with."),
    t!(Timeline, "obj", "In what order did <s> hold relation <r> with other entities? List them from earliest to latest."),
    t!(Timeline, "obj", "Give the sequence of entities <s> was linked to through <r>, sorted by start year."),
    t!(Timeline, "subj", "List, in chronological order, all entities that had relation <r> with <o>."),
    t!(Timeline, "subj", "Which entities held relation <r> with <o>? Sort them from the earliest to the latest."),
    t!(Timeline, "subj", "Give the succession of entities that were in relation <r> with <o>, ordered by start year."),
];

static BEFORE_AFTER: &[QuestionTemplate] = &[
    t!(
        BeforeAfter,
        "obj",
        "With which entity did <s> have relation <r> right <dir> <pivot>?"
    ),
    t!(
        BeforeAfter,
        "obj",
        "Just <dir> its <r> relation with <pivot>, with which entity did <s> hold <r>?"
    ),
    t!(
        BeforeAfter,
        "obj",
        "Which entity immediately <dir> <pivot> in the list of <r> partners of <s>?"
    ),
    t!(
        BeforeAfter,
        "subj",
        "Which entity had relation <r> with <o> right <dir> <pivot> did?"
    ),
    t!(
        BeforeAfter,
        "subj",
        "Who held relation <r> with <o> immediately <dir> <pivot>?"
    ),
    t!(
        BeforeAfter,
        "subj",
        "Among the holders of <r> with <o>, which one comes just <dir> <pivot>?"
    ),
];

static EVENT_AT_TIME_T: &[QuestionTemplate] = &[
    t!(
        EventAtTimeT,
        "obj",
        "With which entities did <s> have relation <r> in <t>?"
    ),
    t!(
        EventAtTimeT,
        "obj",
        "In the year <t>, which entities was <s> in relation <r> with?"
    ),
    t!(
        EventAtTimeT,
        "obj",
        "Which entities were linked to <s> by relation <r> during <t>?"
    ),
    t!(
        EventAtTimeT,
        "subj",
        "Which entities had relation <r> with <o> in <t>?"
    ),
    t!(
        EventAtTimeT,
        "subj",
        "In <t>, who held relation <r> with <o>?"
    ),
    t!(
        EventAtTimeT,
        "subj",
        "During the year <t>, which entities were in relation <r> with <o>?"
    ),
];

static EVENT_AT_WHAT_TIME: &[QuestionTemplate] = &[
    t!(
        EventAtWhatTime,
        "start",
        "In which year did <s> begin having relation <r> with <o><occ>?"
    ),
    t!(
        EventAtWhatTime,
        "start",
        "When did relation <r> between <s> and <o> start<occ>?"
    ),
    t!(
        EventAtWhatTime,
        "end",
        "In which year did <s> stop having relation <r> with <o><occ>?"
    ),
    t!(
        EventAtWhatTime,
        "end",
        "When did relation <r> between <s> and <o> come to an end<occ>?"
    ),
    t!(
        EventAtWhatTime,
        "interval",
        "During which years did <s> have relation <r> with <o><occ>?"
    ),
    t!(
        EventAtWhatTime,
        "interval",
        "From when to when was <s> in relation <r> with <o><occ>?"
    ),
];

static FIRST_LAST: &[QuestionTemplate] = &[
    t!(
        FirstLast,
        "obj",
        "What was the <which> entity <s> had relation <r> with?"
    ),
    t!(
        FirstLast,
        "obj",
        "Which entity was the <which> one to be in relation <r> with <s>?"
    ),
    t!(
        FirstLast,
        "obj",
        "Considering every <r> relation of <s>, which entity came <which>?"
    ),
    t!(
        FirstLast,
        "subj",
        "Which entity was the <which> to hold relation <r> with <o>?"
    ),
    t!(
        FirstLast,
        "subj",
        "Who was the <which> entity in relation <r> with <o>?"
    ),
    t!(
        FirstLast,
        "subj",
        "Of all entities that had relation <r> with <o>, which one was <which>?"
    ),
];

static EVENT_AT_THE_TIME_OF_ANOTHER_EVENT: &[QuestionTemplate] = &[
    t!(EventAtTheTimeOfAnotherEvent, "obj", "When <as> <anchor_when> having relation <ar> with <ao>, with which entities did <s> have relation <r>?"),
    t!(EventAtTheTimeOfAnotherEvent, "obj", "At the moment <as> <anchor_when> its <ar> relation with <ao>, which entities was <s> in relation <r> with?"),
    t!(EventAtTheTimeOfAnotherEvent, "obj", "Which entities did <s> hold relation <r> with in the year <as> <anchor_when> having relation <ar> with <ao>?"),
    t!(EventAtTheTimeOfAnotherEvent, "subj", "When <as> <anchor_when> having relation <ar> with <ao>, which entities had relation <r> with <o>?"),
    t!(EventAtTheTimeOfAnotherEvent, "subj", "In the year <as> <anchor_when> its <ar> relation with <ao>, who was in relation <r> with <o>?"),
    t!(EventAtTheTimeOfAnotherEvent, "subj", "Which entities held relation <r> with <o> at the time <as> <anchor_when> having relation <ar> with <ao>?"),
];

static NUMBER_OF_EVENTS_IN_TIME_INTERVAL: &[QuestionTemplate] = &[
    t!(NumberOfEventsInTimeInterval, "obj", "How many times did <s> have relation <r> from <wa> to <wb>?"),
    t!(NumberOfEventsInTimeInterval, "obj", "Between <wa> and <wb>, how many <r> relations did <s> start and finish?"),
    t!(NumberOfEventsInTimeInterval, "obj", "Count the <r> relations of <s> that took place entirely within <wa> and <wb>."),
    t!(NumberOfEventsInTimeInterval, "subj", "How many times did an entity have relation <r> with <o> from <wa> to <wb>?"),
    t!(NumberOfEventsInTimeInterval, "subj", "Between <wa> and <wb>, how many <r> relations with <o> began and ended?"),
    t!(NumberOfEventsInTimeInterval, "subj", "Count the <r> relations involving <o> as object that lie completely between <wa> and <wb>."),
];

static RELATION_DURATION: &[QuestionTemplate] = &[
    t!(
        RelationDuration,
        "full",
        "How long did <s> have relation <r> with <o><occ>?"
    ),
    t!(
        RelationDuration,
        "full",
        "For how many years was <s> in relation <r> with <o><occ>?"
    ),
    t!(
        RelationDuration,
        "full",
        "What was the duration of relation <r> between <s> and <o><occ>?"
    ),
    t!(
        RelationDuration,
        "full",
        "How many years did relation <r> from <s> to <o> last<occ>?"
    ),
    t!(
        RelationDuration,
        "full",
        "Give the length in years of the <r> relation linking <s> and <o><occ>."
    ),
];

static GET_ENTITY_BY_DURATION: &[QuestionTemplate] = &[
    t!(
        GetEntityByDuration,
        "obj",
        "With which entity did <s> have the <mode> relation <r>?"
    ),
    t!(
        GetEntityByDuration,
        "obj",
        "Which of <s>'s <r> relations was the <mode>? Give the entity."
    ),
    t!(
        GetEntityByDuration,
        "obj",
        "Which entity held the <mode> <r> relation with <s> as subject?"
    ),
    t!(
        GetEntityByDuration,
        "subj",
        "Which entity had the <mode> relation <r> with <o>?"
    ),
    t!(
        GetEntityByDuration,
        "subj",
        "Who holds the record for the <mode> <r> relation with <o>?"
    ),
    t!(
        GetEntityByDuration,
        "subj",
        "Among the entities in relation <r> with <o>, whose relation was the <mode>?"
    ),
];

static FIND_ENTITIES_DURING_TRIPLET: &[QuestionTemplate] = &[
    t!(FindEntitiesDuringTriplet, "obj", "While <as> had relation <ar> with <ao>, with which entities did <s> have relation <r>?"),
    t!(FindEntitiesDuringTriplet, "obj", "During the time <as> was in relation <ar> with <ao>, which entities was <s> linked to by <r>?"),
    t!(FindEntitiesDuringTriplet, "obj", "List the entities <s> held relation <r> with at some point while <as> had relation <ar> with <ao>."),
    t!(FindEntitiesDuringTriplet, "subj", "While <as> had relation <ar> with <ao>, which entities had relation <r> with <o>?"),
    t!(FindEntitiesDuringTriplet, "subj", "During the period <as> was in relation <ar> with <ao>, who held relation <r> with <o>?"),
    t!(FindEntitiesDuringTriplet, "subj", "List the entities in relation <r> with <o> at some point while <as> had relation <ar> with <ao>."),
];

static GET_ENTITIES_IN_BETWEEN: &[QuestionTemplate] = &[
    t!(GetEntitiesInBetween, "obj", "Since <s> started relation <r> with <from> until it started it with <to>, with which other entities did it begin that relation?"),
    t!(GetEntitiesInBetween, "obj", "Between the start of <s>'s <r> relation with <from> and the start of the one with <to>, list the other entities <s> began relation <r> with."),
    t!(GetEntitiesInBetween, "obj", "Which entities did <s> start having relation <r> with after <from> but before <to>?"),
    t!(GetEntitiesInBetween, "subj", "Since <from> began relation <r> with <o> until <to> did, which other entities began that relation with <o>?"),
    t!(GetEntitiesInBetween, "subj", "Between the moment <from> started relation <r> with <o> and the moment <to> did, list the entities that started it in between."),
    t!(GetEntitiesInBetween, "subj", "Which entities started relation <r> with <o> after <from> and before <to>?"),
];

static CALCULATE_TOTAL_RELATION_TIME: &[QuestionTemplate] = &[
    t!(
        CalculateTotalRelationTime,
        "obj",
        "For how many years in total did <s> have relation <r> with some entity?"
    ),
    t!(
        CalculateTotalRelationTime,
        "obj",
        "How long, overall, was <s> in relation <r>?"
    ),
    t!(
        CalculateTotalRelationTime,
        "obj",
        "How much time did <s> spend holding relation <r> altogether?"
    ),
    t!(
        CalculateTotalRelationTime,
        "subj",
        "For how many years in total was some entity in relation <r> with <o>?"
    ),
    t!(
        CalculateTotalRelationTime,
        "subj",
        "How long, overall, did <o> have someone in relation <r> with it?"
    ),
    t!(
        CalculateTotalRelationTime,
        "subj",
        "How much time in total was covered by <r> relations with <o>?"
    ),
];

static IS_TRIPLET_WITHIN_TIMESPAN: &[QuestionTemplate] = &[
    t!(
        IsTripletWithinTimespan,
        "full",
        "Did <s> have relation <r> with <o> entirely between <wa> and <wb>?"
    ),
    t!(
        IsTripletWithinTimespan,
        "full",
        "Was relation <r> between <s> and <o> fully contained in the period <wa>-<wb>?"
    ),
    t!(
        IsTripletWithinTimespan,
        "full",
        "Did the <r> relation from <s> to <o> both start and end between <wa> and <wb>?"
    ),
    t!(
        IsTripletWithinTimespan,
        "full",
        "Is it true that <s> held relation <r> with <o> within the years <wa> to <wb>?"
    ),
    t!(
        IsTripletWithinTimespan,
        "full",
        "Did <s> begin and finish relation <r> with <o> during <wa>-<wb>?"
    ),
];

static CHECK_INTERVAL_WITHOUT_RELATION: &[QuestionTemplate] = &[
    t!(CheckIntervalWithoutRelation, "obj", "Was <s> without relation <r> for more than <gap> years between <wa> and <wb>?"),
    t!(CheckIntervalWithoutRelation, "obj", "Between <wa> and <wb>, did <s> go more than <gap> years without holding relation <r>?"),
    t!(CheckIntervalWithoutRelation, "obj", "From <wa> to <wb>, was there a pause longer than <gap> years in <s>'s <r> relations?"),
    t!(CheckIntervalWithoutRelation, "subj", "Was <o> without anyone in relation <r> for more than <gap> years between <wa> and <wb>?"),
    t!(CheckIntervalWithoutRelation, "subj", "Between <wa> and <wb>, did <o> go more than <gap> years with no entity holding relation <r> with it?"),
    t!(CheckIntervalWithoutRelation, "subj", "From <wa> to <wb>, was there a gap longer than <gap> years in the <r> relations with <o>?"),
];

static COMPARE_TRIPLET_DURATIONS: &[QuestionTemplate] = &[
    t!(CompareTripletDurations, "full", "Did <s> have relation <r> with <o> for <cmp> than <s2> had relation <r2> with <o2>?"),
    t!(CompareTripletDurations, "full", "Was the relation <r> between <s> and <o> <cmp> in total than relation <r2> between <s2> and <o2>?"),
    t!(CompareTripletDurations, "full", "Compared with <s2> holding <r2> with <o2>, did <s> hold <r> with <o> for a <cmp> time?"),
    t!(CompareTripletDurations, "full", "Is the total time <s> spent in relation <r> with <o> <cmp> than the time <s2> spent in relation <r2> with <o2>?"),
    t!(CompareTripletDurations, "full", "Did (<s>, <r>, <o>) last <cmp> overall than (<s2>, <r2>, <o2>)?"),
];

static SEQUENCE_OF_RELATIONS_IN_INTERVAL: &[QuestionTemplate] = &[
    t!(
        SequenceOfRelationsInInterval,
        "full",
        "Did <s> <seq>, all between <wa> and <wb>?"
    ),
    t!(
        SequenceOfRelationsInInterval,
        "full",
        "Between <wa> and <wb>, did <s> <seq>?"
    ),
    t!(
        SequenceOfRelationsInInterval,
        "full",
        "Is it true that within <wa>-<wb> <s> managed to <seq>?"
    ),
    t!(
        SequenceOfRelationsInInterval,
        "full",
        "In the period from <wa> to <wb>, did <s> first <seq>?"
    ),
    t!(
        SequenceOfRelationsInInterval,
        "full",
        "Did the events happen in this order for <s> inside <wa>-<wb>: <seq>?"
    ),
];

static COUNT_RELATIONS_WITH_DURATION: &[QuestionTemplate] = &[
    t!(CountRelationsWithDuration, "obj", "How many <r> relations lasting <op> <n> years did <s> have between <wa> and <wb>?"),
    t!(CountRelationsWithDuration, "obj", "From <wa> to <wb>, how many times did <s> hold relation <r> for <op> <n> years?"),
    t!(CountRelationsWithDuration, "obj", "Count the relations <r> of <s> active between <wa> and <wb> whose duration was <op> <n> years."),
    t!(CountRelationsWithDuration, "subj", "How many <r> relations with <o> lasting <op> <n> years were active between <wa> and <wb>?"),
    t!(CountRelationsWithDuration, "subj", "From <wa> to <wb>, how many times did an entity hold relation <r> with <o> for <op> <n> years?"),
    t!(CountRelationsWithDuration, "subj", "Count the <r> relations with <o> active between <wa> and <wb> that lasted <op> <n> years."),
];

pub fn templates_for(q: QuestionType) -> &'static [QuestionTemplate] {
    use QuestionType as Q;
    match q {
        Q::Timeline => TIMELINE,
        Q::BeforeAfter => BEFORE_AFTER,
        Q::EventAtTimeT => EVENT_AT_TIME_T,
        Q::EventAtWhatTime => EVENT_AT_WHAT_TIME,
        Q::FirstLast => FIRST_LAST,
        Q::EventAtTheTimeOfAnotherEvent => EVENT_AT_THE_TIME_OF_ANOTHER_EVENT,
        Q::NumberOfEventsInTimeInterval => NUMBER_OF_EVENTS_IN_TIME_INTERVAL,
        Q::RelationDuration => RELATION_DURATION,
        Q::GetEntityByDuration => GET_ENTITY_BY_DURATION,
        Q::FindEntitiesDuringTriplet => FIND_ENTITIES_DURING_TRIPLET,
        Q::GetEntitiesInBetween => GET_ENTITIES_IN_BETWEEN,
        Q::CalculateTotalRelationTime => CALCULATE_TOTAL_RELATION_TIME,
        Q::IsTripletWithinTimespan => IS_TRIPLET_WITHIN_TIMESPAN,
        Q::CheckIntervalWithoutRelation => CHECK_INTERVAL_WITHOUT_RELATION,
        Q::CompareTripletDurations => COMPARE_TRIPLET_DURATIONS,
        Q::SequenceOfRelationsInInterval => SEQUENCE_OF_RELATIONS_IN_INTERVAL,
        Q::CountRelationsWithDuration => COUNT_RELATIONS_WITH_DURATION,
    }
}

/// Fill `<name>` placeholders from `values`. Unknown names are left as is.
pub fn fill(text: &str, values: &[(&str, String)]) -> String {
    let mut out = String::with_capacity(text.len() + 32);
    let mut rest = text;
    while let Some(a) = rest.find('<') {
        out.push_str(&rest[..a]);
        let tail = &rest[a..];
        let hit = tail[1..].find('>').and_then(|b| {
            let name = &tail[1..1 + b];
            values
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| (v, b + 2))
        });
        match hit {
            Some((v, consumed)) => {
                out.push_str(v);
                rest = &tail[consumed..];
            }
            None => {
                out.push('<');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}
