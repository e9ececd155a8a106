//! Parsing model replies: fenced JSON, answers, function calls and scores.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use tempqa_core::funcset::SchemaEntry;
use tempqa_core::{AnswerType, AnswerValue, FuncError, FunctionCall, Interval, TypedCall};

/// A pipeline's final answer: a typed value, or the text that could not be
/// turned into one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Parsed(AnswerValue),
    Unparsed(String),
}

impl Answer {
    pub fn value(&self) -> Option<&AnswerValue> {
        match self {
            Answer::Parsed(v) => Some(v),
            Answer::Unparsed(_) => None,
        }
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Parsed(v) => write!(f, "{v}"),
            Answer::Unparsed(s) => write!(f, "unparsed: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnswerParseError {
    #[error("reply contains no JSON object")]
    NoJson,
    #[error("JSON object has no `{0}` field")]
    MissingField(&'static str),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectError {
    #[error("reply contains no function call")]
    NoCall,
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error(transparent)]
    ArgumentType(FuncError),
}

/// Bodies of fenced blocks with the given info string, in order.
pub fn fenced_blocks<'a>(text: &'a str, tag: &str) -> Vec<&'a str> {
    let mut out = Vec::new();
    let fence = format!("```{tag}");
    let mut rest = text;
    while let Some(i) = rest.find(&fence) {
        let body = &rest[i + fence.len()..];
        // The info string must end the fence token.
        if body.starts_with(|c: char| c.is_alphanumeric() || c == '_') {
            rest = body;
            continue;
        }
        match body.find("```") {
            Some(end) => {
                out.push(body[..end].trim());
                rest = &body[end + 3..];
            }
            None => {
                out.push(body.trim());
                break;
            }
        }
    }
    out
}

/// JSON values in a reply: every parseable ```json block, or when there is
/// none, the first bare JSON object found in the text.
pub fn json_values(text: &str) -> Vec<Value> {
    let fenced: Vec<Value> = fenced_blocks(text, "json")
        .into_iter()
        .filter_map(|b| serde_json::from_str(b).ok())
        .collect();
    if !fenced.is_empty() {
        return fenced;
    }
    for (i, _) in text.match_indices('{') {
        let mut stream = serde_json::Deserializer::from_str(&text[i..]).into_iter::<Value>();
        if let Some(Ok(v @ Value::Object(_))) = stream.next() {
            return vec![v];
        }
    }
    Vec::new()
}

/// First JSON object in the reply that has `field`.
fn object_with<'a>(values: &'a [Value], field: &str) -> Option<&'a serde_json::Map<String, Value>> {
    values.iter().filter_map(Value::as_object).find(|o| o.contains_key(field))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    pub explanation: String,
    pub answer: Answer,
}

/// Parse the `explanation` and `answer` fields of a reply and coerce the
/// answer to `answer_type`. Values that cannot be coerced are kept as
/// [`Answer::Unparsed`].
pub fn extract_answer(reply: &str, answer_type: AnswerType) -> Result<Extracted, AnswerParseError> {
    let values = json_values(reply);
    if values.is_empty() {
        return Err(AnswerParseError::NoJson);
    }
    let obj = object_with(&values, "answer").ok_or(AnswerParseError::MissingField("answer"))?;
    let raw = &obj["answer"];
    let explanation = match obj.get("explanation") {
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
        None => String::new(),
    };
    let answer = match coerce_json(raw, answer_type) {
        Some(v) => Answer::Parsed(v),
        None => Answer::Unparsed(raw.to_string()),
    };
    Ok(Extracted { explanation, answer })
}

fn entity(s: &str) -> Option<tempqa_core::EntityId> {
    tempqa_core::EntityId::new(s.trim()).ok()
}

fn integer(v: &Value) -> Option<i64> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .or_else(|| n.as_f64().filter(|f| f.fract() == 0.0 && f.abs() < 9e15).map(|f| f as i64)),
        Value::String(s) => {
            let s = s.trim();
            // Accept a bare integer optionally followed by a unit word.
            let head = s.split_whitespace().next()?;
            let rest_is_words = s[head.len()..].chars().all(|c| c.is_alphabetic() || c.is_whitespace());
            head.parse().ok().filter(|_| rest_is_words)
        }
        Value::Array(xs) if xs.len() == 1 => integer(&xs[0]),
        _ => None,
    }
}

fn boolean(v: &Value) -> Option<bool> {
    match v {
        Value::Bool(b) => Some(*b),
        Value::String(s) => match s.trim().to_ascii_lowercase().as_str() {
            "true" | "yes" => Some(true),
            "false" | "no" => Some(false),
            _ => None,
        },
        Value::Array(xs) if xs.len() == 1 => boolean(&xs[0]),
        _ => None,
    }
}

/// Best-effort conversion of a plain JSON answer to the requested type.
pub fn coerce_json(v: &Value, ty: AnswerType) -> Option<AnswerValue> {
    match ty {
        AnswerType::Entity => match v {
            Value::String(s) => entity(s).map(AnswerValue::Entity),
            Value::Array(xs) if xs.len() == 1 => coerce_json(&xs[0], ty),
            _ => None,
        },
        AnswerType::EntityList => match v {
            Value::Array(xs) => xs
                .iter()
                .map(|x| x.as_str().and_then(entity))
                .collect::<Option<Vec<_>>>()
                .map(AnswerValue::EntityList),
            Value::String(s) if s.trim().is_empty() => Some(AnswerValue::EntityList(Vec::new())),
            Value::String(s) => s
                .split(',')
                .map(entity)
                .collect::<Option<Vec<_>>>()
                .map(AnswerValue::EntityList),
            _ => None,
        },
        AnswerType::Boolean => boolean(v).map(AnswerValue::Boolean),
        AnswerType::Count => integer(v).map(AnswerValue::Count),
        AnswerType::Duration => integer(v).map(AnswerValue::Duration),
        AnswerType::TimePoint => integer(v).map(AnswerValue::TimePoint),
        AnswerType::TimeInterval => {
            let (a, b) = match v {
                Value::Array(xs) if xs.len() == 2 => (integer(&xs[0])?, integer(&xs[1])?),
                Value::Object(o) => (integer(o.get("start")?)?, integer(o.get("end")?)?),
                _ => return None,
            };
            Interval::new(a, b).ok().map(AnswerValue::TimeInterval)
        }
    }
}

/// Re-type a value, e.g. a count produced where a duration was asked for.
pub fn coerce_value(v: &AnswerValue, ty: AnswerType) -> Option<AnswerValue> {
    if v.answer_type() == ty {
        return Some(v.clone());
    }
    coerce_json(&v.to_plain_json(), ty)
}

/// The function call in a reply: a JSON object with `name` (or `function`)
/// and an `arguments` object. The name must appear in `bundle` and the
/// arguments must type-check.
pub fn select_function(reply: &str, bundle: &[SchemaEntry]) -> Result<FunctionCall, SelectError> {
    let values = json_values(reply);
    let obj = values
        .iter()
        .filter_map(Value::as_object)
        .find(|o| o.get("name").or_else(|| o.get("function")).is_some_and(Value::is_string))
        .ok_or(SelectError::NoCall)?;
    let name = obj.get("name").or_else(|| obj.get("function")).and_then(Value::as_str).unwrap_or_default();
    if !bundle.iter().any(|e| e.name == name) {
        return Err(SelectError::UnknownFunction(name.to_string()));
    }
    let mut call = FunctionCall::new(name);
    match obj.get("arguments").or_else(|| obj.get("parameters")) {
        Some(Value::Object(args)) => {
            for (k, v) in args {
                call = call.arg(k, v.clone());
            }
        }
        None => {}
        Some(_) => {
            return Err(SelectError::ArgumentType(FuncError::ArgumentType {
                param: "arguments".into(),
                reason: "expected an object".into(),
            }))
        }
    }
    TypedCall::from_call(&call).map_err(SelectError::ArgumentType)?;
    Ok(call)
}

/// The `score` field of a reply as a number.
pub fn parse_score(reply: &str) -> Option<f64> {
    let values = json_values(reply);
    let v = &object_with(&values, "score")?["score"];
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .filter(|x: &f64| x.is_finite())
}
