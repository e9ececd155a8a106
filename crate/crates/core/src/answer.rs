//! Answer values shared by solvers, the DSL, pipelines and scoring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::tkg::{EntityId, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerType {
    Entity,
    EntityList,
    Boolean,
    Count,
    Duration,
    TimePoint,
    TimeInterval,
}

impl AnswerType {
    pub const ALL: [AnswerType; 7] = [
        AnswerType::Entity,
        AnswerType::EntityList,
        AnswerType::Boolean,
        AnswerType::Count,
        AnswerType::Duration,
        AnswerType::TimePoint,
        AnswerType::TimeInterval,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AnswerType::Entity => "entity",
            AnswerType::EntityList => "entity_list",
            AnswerType::Boolean => "boolean",
            AnswerType::Count => "count",
            AnswerType::Duration => "duration",
            AnswerType::TimePoint => "time_point",
            AnswerType::TimeInterval => "time_interval",
        }
    }
}

impl fmt::Display for AnswerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown answer type `{0}`")]
pub struct UnknownAnswerType(pub String);

impl FromStr for AnswerType {
    type Err = UnknownAnswerType;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AnswerType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownAnswerType(s.to_string()))
    }
}

/// Tagged answer. Serialized as `{"type": "<tag>", "value": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum AnswerValue {
    Entity(EntityId),
    EntityList(Vec<EntityId>),
    Boolean(bool),
    Count(i64),
    Duration(i64),
    TimePoint(i64),
    TimeInterval(Interval),
}

impl AnswerValue {
    pub fn answer_type(&self) -> AnswerType {
        match self {
            AnswerValue::Entity(_) => AnswerType::Entity,
            AnswerValue::EntityList(_) => AnswerType::EntityList,
            AnswerValue::Boolean(_) => AnswerType::Boolean,
            AnswerValue::Count(_) => AnswerType::Count,
            AnswerValue::Duration(_) => AnswerType::Duration,
            AnswerValue::TimePoint(_) => AnswerType::TimePoint,
            AnswerValue::TimeInterval(_) => AnswerType::TimeInterval,
        }
    }

    /// Plain JSON form as an LLM would be asked to write it: a string, list,
    /// bool, integer or `[a, b]` pair.
    pub fn to_plain_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            AnswerValue::Entity(e) => json!(e.as_str()),
            AnswerValue::EntityList(es) => json!(es.iter().map(|e| e.as_str()).collect::<Vec<_>>()),
            AnswerValue::Boolean(b) => json!(b),
            AnswerValue::Count(n) | AnswerValue::Duration(n) | AnswerValue::TimePoint(n) => {
                json!(n)
            }
            AnswerValue::TimeInterval(iv) => json!([iv.start(), iv.end()]),
        }
    }
}

impl fmt::Display for AnswerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnswerValue::Entity(e) => write!(f, "{e}"),
            AnswerValue::EntityList(es) => {
                let parts: Vec<&str> = es.iter().map(|e| e.as_str()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            AnswerValue::Boolean(b) => write!(f, "{b}"),
            AnswerValue::Count(n) | AnswerValue::Duration(n) | AnswerValue::TimePoint(n) => {
                write!(f, "{n}")
            }
            AnswerValue::TimeInterval(iv) => write!(f, "{iv}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagged_serde() {
        let v = AnswerValue::EntityList(vec![EntityId::new("E2").unwrap()]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"type":"entity_list","value":["E2"]}"#);
        assert_eq!(serde_json::from_str::<AnswerValue>(&s).unwrap(), v);
        let iv = AnswerValue::TimeInterval(Interval::new(2006, 2010).unwrap());
        assert_eq!(
            serde_json::to_string(&iv).unwrap(),
            r#"{"type":"time_interval","value":[2006,2010]}"#
        );
    }

    #[test]
    fn type_names_round_trip() {
        for t in AnswerType::ALL {
            assert_eq!(t.as_str().parse::<AnswerType>().unwrap(), t);
        }
    }
}
