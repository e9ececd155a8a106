//! Syntax tree and canonical printer.

use std::collections::HashSet;
use std::fmt::{self, Write};

use super::lexer::{is_ident_continue, is_ident_start};
use crate::funcset::QuestionType;
use crate::primitives::Comparator;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Int(i64),
    /// Entity, relation or keyword literal.
    Id(String),
    Wild,
    /// Reference to a `let` binding.
    Var(String),
    Cmp(Comparator),
    Bool(bool),
    List(Vec<Arg>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallArg {
    pub name: Option<String>,
    pub value: Arg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    /// `facts(s, r, o)`: the matching facts in insertion order.
    Facts([Arg; 3]),
    Var(String),
    Call {
        function: QuestionType,
        args: Vec<CallArg>,
    },
}

macro_rules! stage_ops {
    ($($variant:ident => $name:literal, [$($arity:literal),*];)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum StageOp { $($variant),* }

        impl StageOp {
            pub const ALL: &'static [StageOp] = &[$(StageOp::$variant),*];

            pub fn name(&self) -> &'static str {
                match self { $(StageOp::$variant => $name),* }
            }

            /// Accepted argument counts.
            pub fn arities(&self) -> &'static [usize] {
                match self { $(StageOp::$variant => &[$($arity),*]),* }
            }

            pub fn from_name(s: &str) -> Option<StageOp> {
                match s { $($name => Some(StageOp::$variant),)* _ => None }
            }
        }
    };
}

stage_ops! {
    Sort => "sort", [2];
    FilterAt => "filter_at", [1];
    FilterOverlap => "filter_overlap", [1, 2];
    FilterWithin => "filter_within", [1, 2];
    FilterDur => "filter_dur", [2];
    FilterStart => "filter_start", [2];
    Except => "except", [1];
    Require => "require", [0];
    Count => "count", [0];
    Exists => "exists", [0];
    Objects => "objects", [0];
    Subjects => "subjects", [0];
    Durations => "durations", [0];
    Starts => "starts", [0];
    Ends => "ends", [0];
    MergeTotal => "merge_total", [0];
    Gaps => "gaps", [1, 2];
    Distinct => "distinct", [0];
    First => "first", [0];
    Last => "last", [0];
    Nth => "nth", [1];
    Single => "single", [0];
    Start => "start", [0];
    End => "end", [0];
    Duration => "duration", [0];
    Interval => "interval", [0];
    Longest => "longest", [0];
    Shortest => "shortest", [0];
    Neighbor => "neighbor", [2];
    Sum => "sum", [0];
    Max => "max", [0];
    Min => "min", [0];
    Any => "any", [2];
    Compare => "compare", [2];
    Sequence => "sequence", [2, 3];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub op: StageOp,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub head: Head,
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactDecl {
    pub subject: String,
    pub relation: String,
    pub object: String,
    pub start: i64,
    pub end: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Fact(FactDecl),
    Let { name: String, expr: Expr },
    Expr(Expr),
}

/// A parsed program: fact declarations, then `let` bindings, then one final
/// expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn declares_facts(&self) -> bool {
        self.statements
            .iter()
            .any(|s| matches!(s, Statement::Fact(_)))
    }

    pub fn fact_count(&self) -> usize {
        self.statements
            .iter()
            .filter(|s| matches!(s, Statement::Fact(_)))
            .count()
    }

    /// Canonical source text, one statement per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let mut bound = HashSet::new();
        for st in &self.statements {
            match st {
                Statement::Fact(f) => {
                    let _ = write!(
                        out,
                        "fact({}, {}, {}, {}, {})",
                        id_text(&f.subject, &bound),
                        id_text(&f.relation, &bound),
                        id_text(&f.object, &bound),
                        f.start,
                        f.end
                    );
                }
                Statement::Let { name, expr } => {
                    let _ = write!(out, "let {name} = ");
                    write_expr(&mut out, expr, &bound);
                    bound.insert(name.clone());
                }
                Statement::Expr(e) => write_expr(&mut out, e, &bound),
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

pub(crate) const RESERVED: &[&str] = &["let", "call", "fact", "facts", "true", "false"];

pub(crate) fn is_bare_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_continue)
}

pub(crate) fn id_text(s: &str, bound: &HashSet<String>) -> String {
    if is_bare_ident(s) && !RESERVED.contains(&s) && !bound.contains(s) {
        s.to_string()
    } else {
        let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

fn write_arg(out: &mut String, a: &Arg, bound: &HashSet<String>) {
    match a {
        Arg::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Arg::Id(s) => out.push_str(&id_text(s, bound)),
        Arg::Wild => out.push('*'),
        Arg::Var(v) => out.push_str(v),
        Arg::Cmp(c) => out.push_str(c.symbol()),
        Arg::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Arg::List(xs) => {
            out.push('[');
            write_args(out, xs, bound);
            out.push(']');
        }
    }
}

fn write_args(out: &mut String, xs: &[Arg], bound: &HashSet<String>) {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_arg(out, x, bound);
    }
}

fn write_expr(out: &mut String, e: &Expr, bound: &HashSet<String>) {
    match &e.head {
        Head::Facts(slots) => {
            out.push_str("facts(");
            write_args(out, slots, bound);
            out.push(')');
        }
        Head::Var(v) => out.push_str(v),
        Head::Call { function, args } => {
            let _ = write!(out, "call {}(", function.name());
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                if let Some(n) = &a.name {
                    let _ = write!(out, "{n}=");
                }
                write_arg(out, &a.value, bound);
            }
            out.push(')');
        }
    }
    for s in &e.stages {
        let _ = write!(out, " |> {}", s.op.name());
        if !s.args.is_empty() {
            out.push('(');
            write_args(out, &s.args, bound);
            out.push(')');
        }
    }
}
