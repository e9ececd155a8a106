//! Resource-limited evaluation.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use super::ast::{Arg, Expr, Head, Program, Stage, StageOp, Statement};
use super::DslError;
use crate::answer::AnswerValue;
use crate::funcset::{evaluate, params_for, window_gaps, FuncError, FunctionCall, TypedCall};
use crate::primitives::{
    filter_duration, filter_time, merge_intervals, sort_facts, Comparator, DurationPredicate,
    Endpoint, Order, SortKey, TimeFilter,
};
use crate::tkg::{EntityId, Fact, Interval, QueryPattern, RelationId, Tkg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_statements: usize,
    pub max_steps: u64,
    pub max_facts: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_statements: 10_000,
            max_steps: 1_000_000,
            max_facts: 100_000,
        }
    }
}

/// What an integer stands for, so that scalars coerce to the right answer type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntKind {
    Count,
    Duration,
    TimePoint,
}

impl IntKind {
    fn wrap(self, n: i64) -> AnswerValue {
        match self {
            IntKind::Count => AnswerValue::Count(n),
            IntKind::Duration => AnswerValue::Duration(n),
            IntKind::TimePoint => AnswerValue::TimePoint(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DslValue {
    Facts(Vec<Fact>),
    Ints {
        kind: IntKind,
        values: Vec<i64>,
    },
    Answer(AnswerValue),
    /// A solver-level failure, carried as a value so it can be reported.
    Failure(FuncError),
}

impl DslValue {
    pub fn kind_name(&self) -> &'static str {
        match self {
            DslValue::Facts(_) => "fact list",
            DslValue::Ints { .. } => "integer list",
            DslValue::Answer(a) => a.answer_type().as_str(),
            DslValue::Failure(_) => "failure",
        }
    }

    /// Coerce the result of a program to a scorable answer.
    pub fn into_answer(self) -> Result<AnswerValue, DslError> {
        match self {
            DslValue::Answer(a) => Ok(a),
            DslValue::Failure(e) => Err(DslError::Func(e)),
            other => Err(DslError::NotAnAnswer(other.kind_name())),
        }
    }

    fn len(&self) -> usize {
        match self {
            DslValue::Facts(fs) => fs.len(),
            DslValue::Ints { values, .. } => values.len(),
            DslValue::Answer(AnswerValue::EntityList(es)) => es.len(),
            _ => 0,
        }
    }
}

impl fmt::Display for DslValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslValue::Facts(fs) => {
                f.write_str("[")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            DslValue::Ints { values, .. } => write!(f, "{values:?}"),
            DslValue::Answer(a) => write!(f, "{a}"),
            DslValue::Failure(e) => write!(f, "failure: {e}"),
        }
    }
}

/// Run `p`. A program that declares facts runs over its own graph and must not
/// be given one; any other program needs `g`.
pub fn execute(p: &Program, g: Option<&Tkg>, lim: &Limits) -> Result<DslValue, DslError> {
    if p.statements.len() > lim.max_statements {
        return Err(DslError::StatementLimitExceeded {
            limit: lim.max_statements,
        });
    }
    let mut m = Machine {
        steps: 0,
        lim,
        env: HashMap::new(),
        statement: 0,
    };
    let own;
    let g = match (p.declares_facts(), g) {
        (true, Some(_)) => return Err(DslError::GraphConflict),
        (false, None) => return Err(DslError::GraphRequired),
        (false, Some(g)) => g,
        (true, None) => {
            if p.fact_count() > lim.max_facts {
                return Err(DslError::FactLimitExceeded {
                    limit: lim.max_facts,
                });
            }
            let mut facts = Vec::with_capacity(p.fact_count());
            for (i, st) in p.statements.iter().enumerate() {
                if let Statement::Fact(d) = st {
                    m.statement = i + 1;
                    m.charge(1)?;
                    facts.push(declared_fact(d).map_err(|reason| DslError::InvalidFact {
                        statement: i + 1,
                        reason,
                    })?);
                }
            }
            own = Tkg::build(facts).map_err(|e| DslError::InvalidFact {
                statement: 0,
                reason: e.to_string(),
            })?;
            &own
        }
    };
    let mut result = None;
    for (i, st) in p.statements.iter().enumerate() {
        m.statement = i + 1;
        match st {
            Statement::Fact(_) => {}
            Statement::Let { name, expr } => {
                m.charge(1)?;
                let v = m.expr(g, expr)?;
                if let DslValue::Failure(_) = v {
                    return Ok(v);
                }
                m.env.insert(name.clone(), v);
            }
            Statement::Expr(e) => {
                m.charge(1)?;
                result = Some(m.expr(g, e)?);
            }
        }
    }
    result.ok_or_else(|| DslError::Syntax {
        line: 1,
        col: 1,
        message: "program has no result expression".into(),
    })
}

fn declared_fact(d: &super::ast::FactDecl) -> Result<Fact, String> {
    let s = EntityId::new(d.subject.clone()).map_err(|e| e.to_string())?;
    let r = RelationId::new(d.relation.clone()).map_err(|e| e.to_string())?;
    let o = EntityId::new(d.object.clone()).map_err(|e| e.to_string())?;
    let iv = Interval::new(d.start, d.end).map_err(|e| e.to_string())?;
    Ok(Fact::new(s, r, o, iv))
}

struct Machine<'l> {
    steps: u64,
    lim: &'l Limits,
    env: HashMap<String, DslValue>,
    statement: usize,
}

impl Machine<'_> {
    fn charge(&mut self, n: usize) -> Result<(), DslError> {
        self.steps = self.steps.saturating_add(n as u64);
        if self.steps > self.lim.max_steps {
            return Err(DslError::StepLimitExceeded {
                limit: self.lim.max_steps,
            });
        }
        Ok(())
    }

    fn type_error(&self, message: impl Into<String>) -> DslError {
        DslError::RuntimeType {
            statement: self.statement,
            message: message.into(),
        }
    }

    fn check_facts(&self, v: &DslValue) -> Result<(), DslError> {
        if let DslValue::Facts(fs) = v {
            if fs.len() > self.lim.max_facts {
                return Err(DslError::FactLimitExceeded {
                    limit: self.lim.max_facts,
                });
            }
        }
        Ok(())
    }

    fn var(&self, name: &str) -> Result<&DslValue, DslError> {
        self.env
            .get(name)
            .ok_or_else(|| self.type_error(format!("`{name}` is unbound")))
    }

    fn expr(&mut self, g: &Tkg, e: &Expr) -> Result<DslValue, DslError> {
        let mut v = self.head(g, &e.head)?;
        self.check_facts(&v)?;
        for s in &e.stages {
            if let DslValue::Failure(_) = v {
                break;
            }
            self.charge(1 + v.len())?;
            v = self.stage(s, v)?;
            self.check_facts(&v)?;
        }
        Ok(v)
    }

    fn head(&mut self, g: &Tkg, h: &Head) -> Result<DslValue, DslError> {
        match h {
            Head::Facts([s, r, o]) => {
                let s = self.slot(s)?;
                let r = self.slot(r)?;
                let o = self.slot(o)?;
                let ent = |x: Option<String>| x.map(EntityId::new).transpose();
                let pattern = match (ent(s), r.map(RelationId::new).transpose(), ent(o)) {
                    (Ok(s), Ok(r), Ok(o)) => QueryPattern::new(s, r, o),
                    _ => return Err(self.type_error("invalid identifier in facts(...)")),
                };
                let fs: Vec<Fact> = g.query(&pattern).into_iter().cloned().collect();
                self.charge(1 + fs.len())?;
                Ok(DslValue::Facts(fs))
            }
            Head::Var(name) => {
                self.charge(1)?;
                Ok(self.var(name)?.clone())
            }
            Head::Call { function, args } => {
                self.charge(1 + g.len())?;
                let params = params_for(*function);
                let mut call = FunctionCall::new(function.name());
                for (i, a) in args.iter().enumerate() {
                    let name = match &a.name {
                        Some(n) => n.as_str(),
                        None => params[i].name,
                    };
                    call = call.arg(name, self.json(&a.value)?);
                }
                let result = TypedCall::from_call(&call).and_then(|c| evaluate(g, &c));
                Ok(match result {
                    Ok(a) => DslValue::Answer(a),
                    Err(e) => DslValue::Failure(e),
                })
            }
        }
    }

    fn slot(&self, a: &Arg) -> Result<Option<String>, DslError> {
        match a {
            Arg::Wild => Ok(None),
            Arg::Id(s) => Ok(Some(s.clone())),
            Arg::Var(v) => match self.var(v)? {
                DslValue::Answer(AnswerValue::Entity(e)) => Ok(Some(e.to_string())),
                other => {
                    Err(self.type_error(format!("`{v}` is a {}, not an entity", other.kind_name())))
                }
            },
            _ => Err(self.type_error("expected an identifier or `*`")),
        }
    }

    fn json(&self, a: &Arg) -> Result<Value, DslError> {
        Ok(match a {
            Arg::Int(n) => Value::from(*n),
            Arg::Id(s) => Value::from(s.as_str()),
            Arg::Wild => Value::from("?"),
            Arg::Cmp(c) => Value::from(c.symbol()),
            Arg::Bool(b) => Value::from(*b),
            Arg::List(xs) => {
                Value::Array(xs.iter().map(|x| self.json(x)).collect::<Result<_, _>>()?)
            }
            Arg::Var(v) => match self.var(v)? {
                DslValue::Answer(ans) => ans.to_plain_json(),
                other => {
                    return Err(self
                        .type_error(format!("cannot pass a {} to a function", other.kind_name())))
                }
            },
        })
    }

    fn int(&self, a: &Arg) -> Result<i64, DslError> {
        match a {
            Arg::Int(n) => Ok(*n),
            Arg::Var(v) => match self.var(v)? {
                DslValue::Answer(
                    AnswerValue::Count(n) | AnswerValue::Duration(n) | AnswerValue::TimePoint(n),
                ) => Ok(*n),
                other => {
                    Err(self
                        .type_error(format!("`{v}` is a {}, not an integer", other.kind_name())))
                }
            },
            _ => Err(self.type_error("expected an integer")),
        }
    }

    fn window(&self, args: &[Arg]) -> Result<Interval, DslError> {
        let (a, b) = match args {
            [a, b] => (self.int(a)?, self.int(b)?),
            [Arg::List(xs)] if xs.len() == 2 => (self.int(&xs[0])?, self.int(&xs[1])?),
            [Arg::Var(v)] => match self.var(v)? {
                DslValue::Answer(AnswerValue::TimeInterval(iv)) => return Ok(*iv),
                other => {
                    return Err(self
                        .type_error(format!("`{v}` is a {}, not an interval", other.kind_name())))
                }
            },
            _ => return Err(self.type_error("expected an interval")),
        };
        Interval::new(a, b).map_err(|e| self.type_error(e.to_string()))
    }

    fn cmp(&self, a: &Arg) -> Result<Comparator, DslError> {
        match a {
            Arg::Cmp(c) => Ok(*c),
            Arg::Id(s) => Comparator::from_str(s).map_err(|e| self.type_error(e.to_string())),
            _ => Err(self.type_error("expected a comparator")),
        }
    }

    fn keyword<'a>(&self, a: &'a Arg) -> Result<&'a str, DslError> {
        match a {
            Arg::Id(s) => Ok(s),
            _ => Err(self.type_error("expected a keyword")),
        }
    }

    fn entity(&self, a: &Arg) -> Result<EntityId, DslError> {
        match a {
            Arg::Var(v) => match self.var(v)? {
                DslValue::Answer(AnswerValue::Entity(e)) => Ok(e.clone()),
                other => {
                    Err(self.type_error(format!("`{v}` is a {}, not an entity", other.kind_name())))
                }
            },
            Arg::Id(s) => EntityId::new(s.clone()).map_err(|e| self.type_error(e.to_string())),
            _ => Err(self.type_error("expected an entity")),
        }
    }

    fn facts_in(&self, op: StageOp, v: DslValue) -> Result<Vec<Fact>, DslError> {
        match v {
            DslValue::Facts(fs) => Ok(fs),
            other => Err(self.type_error(format!(
                "`{}` needs a fact list, got a {}",
                op.name(),
                other.kind_name()
            ))),
        }
    }

    fn ints_in(&self, op: StageOp, v: DslValue) -> Result<(IntKind, Vec<i64>), DslError> {
        match v {
            DslValue::Ints { kind, values } => Ok((kind, values)),
            other => Err(self.type_error(format!(
                "`{}` needs an integer list, got a {}",
                op.name(),
                other.kind_name()
            ))),
        }
    }

    fn stage(&mut self, s: &Stage, v: DslValue) -> Result<DslValue, DslError> {
        use StageOp as S;
        let a = &s.args;
        let ok_facts = |fs: Vec<Fact>| Ok(DslValue::Facts(fs));
        let ints = |kind, values| Ok(DslValue::Ints { kind, values });
        let answer = |x| Ok(DslValue::Answer(x));
        let fail = |e| Ok(DslValue::Failure(e));
        match s.op {
            S::Sort => {
                let fs = self.facts_in(s.op, v)?;
                let endpoint = if self.keyword(&a[0])? == "end" {
                    Endpoint::End
                } else {
                    Endpoint::Start
                };
                let order = if self.keyword(&a[1])? == "desc" {
                    Order::Desc
                } else {
                    Order::Asc
                };
                ok_facts(sort_facts(&fs, SortKey::new(endpoint, order)))
            }
            S::FilterAt => {
                let t = self.int(&a[0])?;
                ok_facts(filter_time(
                    &self.facts_in(s.op, v)?,
                    TimeFilter::AtPoint(t),
                ))
            }
            S::FilterOverlap => {
                let w = self.window(a)?;
                ok_facts(filter_time(
                    &self.facts_in(s.op, v)?,
                    TimeFilter::Overlaps(w),
                ))
            }
            S::FilterWithin => {
                let w = self.window(a)?;
                ok_facts(filter_time(
                    &self.facts_in(s.op, v)?,
                    TimeFilter::ContainedIn(w),
                ))
            }
            S::FilterDur => {
                let pred = DurationPredicate::new(self.cmp(&a[0])?, self.int(&a[1])?);
                ok_facts(filter_duration(&self.facts_in(s.op, v)?, pred))
            }
            S::FilterStart => {
                let (c, t) = (self.cmp(&a[0])?, self.int(&a[1])?);
                let fs = self.facts_in(s.op, v)?;
                ok_facts(fs.into_iter().filter(|f| c.holds(f.start(), t)).collect())
            }
            S::Except => {
                let drop: HashSet<Fact> = match &a[0] {
                    Arg::Var(name) => match self.var(name)? {
                        DslValue::Facts(fs) => fs.iter().cloned().collect(),
                        other => {
                            return Err(self.type_error(format!(
                                "`{name}` is a {}, not facts",
                                other.kind_name()
                            )))
                        }
                    },
                    _ => return Err(self.type_error("`except` takes a bound fact list")),
                };
                let fs = self.facts_in(s.op, v)?;
                ok_facts(fs.into_iter().filter(|f| !drop.contains(f)).collect())
            }
            S::Require => match &v {
                DslValue::Facts(_)
                | DslValue::Ints { .. }
                | DslValue::Answer(AnswerValue::EntityList(_)) => {
                    if v.len() == 0 {
                        fail(FuncError::NoMatchingFacts)
                    } else {
                        Ok(v)
                    }
                }
                other => Err(self.type_error(format!(
                    "`require` needs a list, got a {}",
                    other.kind_name()
                ))),
            },
            S::Count | S::Exists => match &v {
                DslValue::Facts(_)
                | DslValue::Ints { .. }
                | DslValue::Answer(AnswerValue::EntityList(_)) => {
                    if s.op == S::Count {
                        answer(AnswerValue::Count(v.len() as i64))
                    } else {
                        answer(AnswerValue::Boolean(v.len() > 0))
                    }
                }
                other => Err(self.type_error(format!(
                    "`{}` needs a list, got a {}",
                    s.op.name(),
                    other.kind_name()
                ))),
            },
            S::Objects => answer(AnswerValue::EntityList(
                self.facts_in(s.op, v)?
                    .into_iter()
                    .map(|f| f.object)
                    .collect(),
            )),
            S::Subjects => answer(AnswerValue::EntityList(
                self.facts_in(s.op, v)?
                    .into_iter()
                    .map(|f| f.subject)
                    .collect(),
            )),
            S::Durations => ints(
                IntKind::Duration,
                self.facts_in(s.op, v)?.iter().map(Fact::duration).collect(),
            ),
            S::Starts => ints(
                IntKind::TimePoint,
                self.facts_in(s.op, v)?.iter().map(Fact::start).collect(),
            ),
            S::Ends => ints(
                IntKind::TimePoint,
                self.facts_in(s.op, v)?.iter().map(Fact::end).collect(),
            ),
            S::MergeTotal => {
                let ivs: Vec<Interval> =
                    self.facts_in(s.op, v)?.iter().map(|f| f.interval).collect();
                answer(AnswerValue::Duration(merge_intervals(&ivs).total_length))
            }
            S::Gaps => {
                let w = self.window(a)?;
                let fs = self.facts_in(s.op, v)?;
                let refs: Vec<&Fact> = fs.iter().collect();
                ints(IntKind::Duration, window_gaps(&refs, w))
            }
            S::Distinct => match v {
                DslValue::Answer(AnswerValue::EntityList(es)) => {
                    let mut seen = HashSet::new();
                    answer(AnswerValue::EntityList(
                        es.into_iter().filter(|e| seen.insert(e.clone())).collect(),
                    ))
                }
                DslValue::Ints { kind, values } => {
                    let mut seen = HashSet::new();
                    ints(
                        kind,
                        values.into_iter().filter(|x| seen.insert(*x)).collect(),
                    )
                }
                DslValue::Facts(fs) => ok_facts(fs),
                other => Err(self.type_error(format!(
                    "`distinct` needs a list, got a {}",
                    other.kind_name()
                ))),
            },
            S::First | S::Last | S::Nth => {
                let len = v.len();
                let idx = match s.op {
                    S::First => 0,
                    S::Last => len.wrapping_sub(1),
                    _ => {
                        let k = self.int(&a[0])?;
                        if k < 1 {
                            return Err(self.type_error("`nth` counts from 1"));
                        }
                        if k as usize > len {
                            return fail(FuncError::OccurrenceOutOfRange {
                                requested: k as usize,
                                available: len,
                            });
                        }
                        k as usize - 1
                    }
                };
                if len == 0 {
                    return fail(FuncError::NoMatchingFacts);
                }
                match v {
                    DslValue::Facts(fs) => ok_facts(vec![fs[idx].clone()]),
                    DslValue::Ints { kind, values } => answer(kind.wrap(values[idx])),
                    DslValue::Answer(AnswerValue::EntityList(es)) => {
                        answer(AnswerValue::Entity(es[idx].clone()))
                    }
                    other => Err(self.type_error(format!(
                        "`{}` needs a list, got a {}",
                        s.op.name(),
                        other.kind_name()
                    ))),
                }
            }
            S::Single | S::Start | S::End | S::Duration | S::Interval => {
                let fs = self.facts_in(s.op, v)?;
                match fs.len() {
                    0 => return fail(FuncError::NoMatchingFacts),
                    1 => {}
                    n => return fail(FuncError::AmbiguousEpisode { count: n }),
                }
                let f = &fs[0];
                match s.op {
                    S::Start => answer(AnswerValue::TimePoint(f.start())),
                    S::End => answer(AnswerValue::TimePoint(f.end())),
                    S::Duration => answer(AnswerValue::Duration(f.duration())),
                    S::Interval => answer(AnswerValue::TimeInterval(f.interval)),
                    _ => ok_facts(fs),
                }
            }
            S::Longest | S::Shortest => {
                let fs = self.facts_in(s.op, v)?;
                let mut best: Option<&Fact> = None;
                for f in &fs {
                    let better = best.is_none_or(|b| match s.op {
                        S::Longest => f.duration() > b.duration(),
                        _ => f.duration() < b.duration(),
                    });
                    if better {
                        best = Some(f);
                    }
                }
                match best {
                    Some(f) => ok_facts(vec![f.clone()]),
                    None => fail(FuncError::NoMatchingFacts),
                }
            }
            S::Neighbor => {
                let pivot = self.entity(&a[0])?;
                let before = self.keyword(&a[1])? == "before";
                let DslValue::Answer(AnswerValue::EntityList(es)) = v else {
                    return Err(self.type_error(format!(
                        "`neighbor` needs an entity list, got a {}",
                        v.kind_name()
                    )));
                };
                let hit = es.iter().position(|e| *e == pivot).and_then(|i| {
                    if before {
                        i.checked_sub(1)
                    } else {
                        Some(i + 1).filter(|j| *j < es.len())
                    }
                });
                match hit {
                    Some(j) => answer(AnswerValue::Entity(es[j].clone())),
                    None => fail(FuncError::NoMatchingFacts),
                }
            }
            S::Sum => {
                let (kind, values) = self.ints_in(s.op, v)?;
                if kind == IntKind::TimePoint {
                    return Err(self.type_error("cannot add time points"));
                }
                answer(kind.wrap(values.iter().sum()))
            }
            S::Max | S::Min => {
                let (kind, values) = self.ints_in(s.op, v)?;
                let x = if s.op == S::Max {
                    values.iter().max()
                } else {
                    values.iter().min()
                };
                match x {
                    Some(x) => answer(kind.wrap(*x)),
                    None => fail(FuncError::NoMatchingFacts),
                }
            }
            S::Any => {
                let (c, n) = (self.cmp(&a[0])?, self.int(&a[1])?);
                let (_, values) = self.ints_in(s.op, v)?;
                answer(AnswerValue::Boolean(values.iter().any(|x| c.holds(*x, n))))
            }
            S::Compare => {
                let (c, rhs) = (self.cmp(&a[0])?, self.int(&a[1])?);
                match v {
                    DslValue::Answer(
                        AnswerValue::Count(x)
                        | AnswerValue::Duration(x)
                        | AnswerValue::TimePoint(x),
                    ) => answer(AnswerValue::Boolean(c.holds(x, rhs))),
                    other => Err(self.type_error(format!(
                        "`compare` needs an integer, got a {}",
                        other.kind_name()
                    ))),
                }
            }
            S::Sequence => {
                let Arg::List(steps) = &a[0] else {
                    return Err(self.type_error("`sequence` takes a list of steps"));
                };
                let mut seq = Vec::with_capacity(steps.len());
                for st in steps {
                    let Arg::List(pair) = st else {
                        return Err(self.type_error("malformed sequence step"));
                    };
                    let r = RelationId::new(self.keyword(&pair[0])?)
                        .map_err(|e| self.type_error(e.to_string()))?;
                    let e = if self.keyword(&pair[1])? == "end" {
                        Endpoint::End
                    } else {
                        Endpoint::Start
                    };
                    seq.push((r, e));
                }
                let w = self.window(&a[1..])?;
                let fs = self.facts_in(s.op, v)?;
                answer(AnswerValue::Boolean(occurs_in_order(&fs, &seq, w)))
            }
        }
    }
}

fn occurs_in_order(fs: &[Fact], seq: &[(RelationId, Endpoint)], w: Interval) -> bool {
    let mut cursor = w.start();
    for (rel, ep) in seq {
        let next = fs
            .iter()
            .filter(|f| f.relation == *rel)
            .map(|f| {
                if *ep == Endpoint::Start {
                    f.start()
                } else {
                    f.end()
                }
            })
            .filter(|t| *t >= cursor && *t <= w.end())
            .min();
        match next {
            Some(t) => cursor = t,
            None => return false,
        }
    }
    true
}
