//! The prompt chains behind each [`Technique`].

use serde_json::Value;
use tempqa_core::funcset::{schema_bundle, schema_entries};
use tempqa_core::ratagen::TaskInstance;
use tempqa_core::tqdsl::{execute, extract_fenced, parse, DslValue};
use tempqa_core::{dispatch, AnswerType, AnswerValue, Tkg};

use super::client::{ChatClient, Message};
use super::extract::{coerce_value, extract_answer, select_function, Answer, SelectError};
use super::mocks::result_json;
use super::{
    DslRecord, Exchange, FunctionCallRecord, PipelineConfig, PipelineError, PipelineResult, Technique,
    REPEAT_SENTINEL,
};

fn answer_format(ty: AnswerType) -> &'static str {
    match ty {
        AnswerType::Entity => "a single entity identifier as a string",
        AnswerType::EntityList => "a JSON list of entity identifier strings",
        AnswerType::Boolean => "true or false",
        AnswerType::Count => "an integer count",
        AnswerType::Duration => "an integer duration",
        AnswerType::TimePoint => "an integer time point",
        AnswerType::TimeInterval => "a two-element list [start, end] of integers",
    }
}

struct Session<'a> {
    t: &'a TaskInstance,
    client: &'a dyn ChatClient,
    cfg: &'a PipelineConfig,
    history: Vec<Message>,
    out: PipelineResult,
}

impl<'a> Session<'a> {
    fn new(t: &'a TaskInstance, tech: Technique, client: &'a dyn ChatClient, cfg: &'a PipelineConfig) -> Self {
        Self {
            t,
            client,
            cfg,
            history: Vec::new(),
            out: PipelineResult {
                instance_id: t.id.clone(),
                technique: tech,
                answer: Answer::Unparsed(String::new()),
                explanation: String::new(),
                transcript: Vec::new(),
                wall_time: 0.0,
                llm_calls: 0,
                function_calls: Vec::new(),
                dsl_programs: Vec::new(),
                reflexions: 0,
                errors: Vec::new(),
            },
        }
    }

    fn render(&self, name: &str, vars: &[(&str, &str)]) -> Result<String, PipelineError> {
        Ok(self.cfg.prompts.render(name, vars)?)
    }

    /// The task statement with either the full text or an excerpt.
    fn task(&self, excerpt: bool) -> Result<String, PipelineError> {
        let data = if excerpt {
            self.t.excerpt(self.cfg.excerpt_facts)
        } else {
            self.t.tkg_text.clone()
        };
        self.render(
            "task",
            &[
                ("question", &self.t.question),
                ("data", &data),
                ("answer_format", answer_format(self.t.answer_type)),
            ],
        )
    }

    fn send(&mut self, step: &str, messages: &[Message]) -> Result<String, PipelineError> {
        let reply = self.client.complete(messages, &self.cfg.params)?;
        self.out.llm_calls += 1;
        self.out.transcript.push(Exchange {
            step: step.to_string(),
            prompt: messages.last().map(|m| m.content.clone()).unwrap_or_default(),
            reply: reply.clone(),
        });
        Ok(reply)
    }

    /// Continue the conversation.
    fn ask(&mut self, step: &str, prompt: String) -> Result<String, PipelineError> {
        self.history.push(Message::user(prompt));
        let messages = self.history.clone();
        let reply = self.send(step, &messages)?;
        self.history.push(Message::assistant(reply.clone()));
        Ok(reply)
    }

    /// One-off prompt on top of the current history, which is left unchanged.
    fn ask_aside(&mut self, step: &str, prompt: String) -> Result<String, PipelineError> {
        let mut messages = self.history.clone();
        messages.push(Message::user(prompt));
        self.send(step, &messages)
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.out.errors.push(e.to_string());
    }

    /// Take the answer from a reply; an unparseable reply is kept as text.
    fn finish_from_reply(&mut self, reply: &str) {
        match extract_answer(reply, self.t.answer_type) {
            Ok(e) => {
                self.out.answer = e.answer;
                self.out.explanation = e.explanation;
            }
            Err(e) => {
                self.error(format!("answer: {e}"));
                self.out.answer = Answer::Unparsed(reply.to_string());
            }
        }
    }

    fn typed(&self, v: AnswerValue) -> Answer {
        match coerce_value(&v, self.t.answer_type) {
            Some(v) => Answer::Parsed(v),
            None => Answer::Unparsed(v.to_string()),
        }
    }

    /// Run a tqdsl program and record it.
    fn run_program(&mut self, source: String, graph: Option<&Tkg>) -> Result<AnswerValue, String> {
        let outcome = parse(&source)
            .and_then(|p| execute(&p, graph, &self.cfg.dsl_limits))
            .and_then(DslValue::into_answer)
            .map_err(|e| e.to_string());
        self.out.dsl_programs.push(DslRecord {
            source,
            result: outcome.clone(),
        });
        outcome
    }
}

pub(super) fn run_technique(
    t: &TaskInstance,
    graph: &Tkg,
    tech: Technique,
    client: &dyn ChatClient,
    cfg: &PipelineConfig,
) -> Result<PipelineResult, PipelineError> {
    let mut s = Session::new(t, tech, client, cfg);
    match tech {
        Technique::Direct => {
            let task = s.task(false)?;
            let reply = s.ask("direct", s.render("direct", &[("task", &task)])?)?;
            s.finish_from_reply(&reply);
        }
        Technique::Cot => {
            let task = s.task(false)?;
            s.ask("analyze", s.render("cot_1", &[("task", &task)])?)?;
            s.ask("represent", s.render("cot_2", &[])?)?;
            let reply = s.ask("solve", s.render("cot_3", &[])?)?;
            s.finish_from_reply(&reply);
        }
        Technique::Cotr => cotr(&mut s)?,
        Technique::Tot => tot(&mut s)?,
        Technique::Cote => {
            let task = s.task(true)?;
            s.ask("analyze", s.render("cote_1", &[("task", &task)])?)?;
            let program = write_program(&mut s)?;
            finish_program(&mut s, program, Some(graph));
        }
        Technique::CoteS => {
            let task = s.task(false)?;
            s.ask("analyze", s.render("cote_1", &[("task", &task)])?)?;
            let decls = structure(&mut s)?;
            let program = write_program(&mut s)?;
            finish_program(&mut s, program.map(|p| format!("{decls}\n{p}")), None);
        }
        Technique::Cotapi => {
            let task = s.task(true)?;
            s.ask("analyze", s.render("cotapi_1", &[("task", &task)])?)?;
            call_function(&mut s, graph)?;
        }
        Technique::CotapiS => {
            let task = s.task(false)?;
            s.ask("analyze", s.render("cotapi_1", &[("task", &task)])?)?;
            let decls = structure(&mut s)?;
            let built = build_graph(&mut s, &decls);
            call_function(&mut s, &built)?;
        }
    }
    Ok(s.out)
}

fn cotr(s: &mut Session) -> Result<(), PipelineError> {
    let task = s.task(false)?;
    s.ask("analyze", s.render("cotr_1", &[("task", &task)])?)?;
    s.ask("identify", s.render("cotr_2", &[])?)?;
    let reply = s.ask("solve", s.render("cotr_3", &[])?)?;
    s.finish_from_reply(&reply);
    let reflexion = s.render("cotr_reflexion", &[])?;
    let resolve = format!("{}\n\n{reflexion}", s.render("cotr_3", &[])?);
    let mut retry = false;
    for _ in 0..s.cfg.max_reflexions {
        let prompt = if retry { resolve.clone() } else { reflexion.clone() };
        let reply = s.ask("reflexion", prompt)?;
        if reply.contains(REPEAT_SENTINEL) {
            s.out.reflexions += 1;
            retry = true;
            continue;
        }
        if let Ok(e) = extract_answer(&reply, s.t.answer_type) {
            s.out.answer = e.answer;
            s.out.explanation = e.explanation;
        } else if retry {
            s.finish_from_reply(&reply);
        }
        break;
    }
    Ok(())
}

/// Option texts from an expansion reply, or the whole reply as one option.
fn options(reply: &str, branch: usize) -> Vec<String> {
    let values = super::extract::json_values(reply);
    let found: Vec<String> = values
        .iter()
        .filter_map(Value::as_object)
        .find(|o| o.contains_key("Option1"))
        .map(|o| {
            (1..=branch)
                .filter_map(|i| o.get(&format!("Option{i}")))
                .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
                .collect()
        })
        .unwrap_or_default();
    if found.is_empty() {
        vec![reply.trim().to_string()]
    } else {
        found
    }
}

fn serialize_path(path: &[String]) -> String {
    path.iter()
        .enumerate()
        .map(|(i, p)| format!("Step {}: {p}", i + 1))
        .collect::<Vec<_>>()
        .join("\n")
}

fn tot(s: &mut Session) -> Result<(), PipelineError> {
    let tc = s.cfg.tot.clone();
    let task = s.task(false)?;
    let max_depth = tc.depth.to_string();
    s.ask("initial", s.render("tot_initial", &[("max_depth", &max_depth), ("task", &task)])?)?;
    let mut frontier: Vec<(Vec<String>, f64)> = vec![(Vec::new(), 0.0)];
    for depth in 1..=tc.depth {
        let mut children = Vec::new();
        for (path, _) in &frontier {
            let node_state = serialize_path(path);
            let expand = s.render(
                "tot_expand",
                &[
                    ("depth", &depth.to_string()),
                    ("max_depth", &max_depth),
                    ("task", &task),
                    ("question", &s.t.question),
                    ("node_state", &node_state),
                ],
            )?;
            let reply = s.ask_aside("expand", expand)?;
            for option in options(&reply, tc.branch).into_iter().take(tc.branch) {
                let mut child = path.clone();
                child.push(option);
                let state = serialize_path(&child);
                let reply = s.ask_aside("evaluate", s.render("tot_evaluate", &[("task", &task), ("state", &state)])?)?;
                let score = super::extract::parse_score(&reply).map(|x| x.clamp(1.0, 10.0)).unwrap_or_else(|| {
                    s.error(format!("depth {depth}: unparseable score"));
                    tc.default_score
                });
                children.push((child, score));
            }
        }
        // Stable sort keeps generation order among equal scores.
        children.sort_by(|a, b| b.1.total_cmp(&a.1));
        children.truncate(tc.beam);
        frontier = children;
    }
    let best = frontier.first().map(|(p, _)| serialize_path(p)).unwrap_or_default();
    let reply = s.ask_aside("final", s.render("tot_final", &[("task", &task), ("reasoning_path", &best)])?)?;
    s.finish_from_reply(&reply);
    Ok(())
}

/// Fenced tqdsl blocks of a reply joined into one source.
fn dsl_source(reply: &str) -> Option<String> {
    let blocks = extract_fenced(reply);
    (!blocks.is_empty()).then(|| blocks.join("\n"))
}

fn structure(s: &mut Session) -> Result<String, PipelineError> {
    let reply = s.ask("structure", s.render("structure", &[])?)?;
    Ok(dsl_source(&reply).unwrap_or_else(|| {
        s.error("structure: reply holds no tqdsl block");
        String::new()
    }))
}

fn write_program(s: &mut Session) -> Result<Option<String>, PipelineError> {
    let guide = s.render("dsl_guide", &[])?;
    let reply = s.ask("program", s.render("cote_solve", &[("dsl_guide", &guide)])?)?;
    let src = dsl_source(&reply);
    if src.is_none() {
        s.error("program: reply holds no tqdsl block");
        s.out.answer = Answer::Unparsed(reply);
    }
    Ok(src)
}

fn finish_program(s: &mut Session, program: Option<String>, graph: Option<&Tkg>) {
    let Some(src) = program else { return };
    match s.run_program(src, graph) {
        Ok(v) => s.out.answer = s.typed(v),
        Err(e) => {
            s.error(format!("program: {e}"));
            s.out.answer = Answer::Unparsed(format!("error: {e}"));
        }
    }
}

/// The graph declared by a structuring step; empty when it does not run.
fn build_graph(s: &mut Session, decls: &str) -> Tkg {
    let src = format!("{decls}\nfacts(*, *, *)");
    let built = parse(&src)
        .and_then(|p| execute(&p, None, &s.cfg.dsl_limits))
        .map_err(|e| e.to_string())
        .and_then(|v| match v {
            DslValue::Facts(fs) => Tkg::build(fs).map_err(|e| e.to_string()),
            other => Err(format!("unexpected {}", other.kind_name())),
        });
    built.unwrap_or_else(|e| {
        s.error(format!("structure: {e}"));
        Tkg::build(Vec::new()).expect("empty graph")
    })
}

fn call_function(s: &mut Session, graph: &Tkg) -> Result<(), PipelineError> {
    let bundle = schema_entries();
    let select = format!(
        "{}\n\n{}",
        s.render("cotapi_3", &[])?,
        s.render("cotapi_call", &[("schema", &schema_bundle())])?
    );
    let reply = s.ask("select", select)?;
    let designated = s.t.question_type.name();
    let record = match select_function(&reply, &bundle) {
        Ok(call) => {
            let result = dispatch(graph, &call).map_err(|e| e.to_string());
            FunctionCallRecord {
                associated: call.name == designated,
                call: Some(call),
                result,
            }
        }
        Err(e) => {
            let name = match &e {
                SelectError::UnknownFunction(n) => Some(n.clone()),
                _ => super::extract::json_values(&reply)
                    .iter()
                    .find_map(|v| v.get("name").or_else(|| v.get("function")).and_then(Value::as_str).map(String::from)),
            };
            s.error(format!("select: {e}"));
            FunctionCallRecord {
                associated: name.as_deref() == Some(designated),
                call: None,
                result: Err(e.to_string()),
            }
        }
    };
    let name = record.call.as_ref().map(|c| c.name.as_str()).unwrap_or("none");
    let results = serde_json::to_string_pretty(&vec![result_json(name, &record.result)]).expect("json");
    s.out.function_calls.push(record);
    let prompt = format!(
        "{}\n\n{}",
        s.render("function_results", &[("results", &results)])?,
        s.render("cotapi_4", &[])?
    );
    let reply = s.ask("answer", prompt)?;
    s.finish_from_reply(&reply);
    Ok(())
}
