//! Line-oriented recursive-descent parser with static arity and keyword checks.

use std::collections::HashSet;
use std::str::FromStr;

use super::ast::{
    Arg, CallArg, Expr, FactDecl, Head, Program, Stage, StageOp, Statement, RESERVED,
};
use super::lexer::{lex_line, Tok, Token};
use super::DslError;
use crate::funcset::{params_for, QuestionType};
use crate::primitives::Comparator;

/// An argument with its source position.
type Located = (Arg, (usize, usize));

struct Logical {
    tokens: Vec<Token>,
    /// Position just past the last character of the line.
    end: (usize, usize),
}

fn logical_lines(src: &str) -> Result<Vec<Logical>, DslError> {
    let mut out: Vec<Logical> = Vec::new();
    for (i, text) in src.lines().enumerate() {
        let line = i + 1;
        let toks = lex_line(text, line)?;
        let Some(first) = toks.first() else { continue };
        let end = (line, text.chars().count() + 1);
        if first.tok == Tok::Pipe {
            match out.last_mut() {
                Some(prev) => {
                    prev.tokens.extend(toks);
                    prev.end = end;
                }
                None => {
                    return Err(DslError::Syntax {
                        line,
                        col: first.col,
                        message: "continuation line without a preceding expression".into(),
                    })
                }
            }
        } else {
            out.push(Logical { tokens: toks, end });
        }
    }
    Ok(out)
}

pub fn parse(src: &str) -> Result<Program, DslError> {
    let lines = logical_lines(src)?;
    let mut bound: HashSet<String> = HashSet::new();
    let mut statements = Vec::with_capacity(lines.len());
    // 0: facts allowed, 1: lets, 2: result seen
    let mut phase = 0;
    for l in &lines {
        let mut p = Cursor {
            toks: &l.tokens,
            pos: 0,
            end: l.end,
            bound: &bound,
        };
        let (line, col) = p.here();
        if phase == 2 {
            return Err(DslError::Syntax {
                line,
                col,
                message: "the result expression must be the last statement".into(),
            });
        }
        let st = match p.peek() {
            Some(Tok::Ident(k)) if k == "fact" && p.peek_at(1) == Some(&Tok::LParen) => {
                if phase > 0 {
                    return Err(DslError::Syntax {
                        line,
                        col,
                        message: "fact declarations must come before any other statement".into(),
                    });
                }
                Statement::Fact(p.fact_decl()?)
            }
            Some(Tok::Ident(k)) if k == "let" => {
                phase = 1;
                p.bump();
                let (nl, nc) = p.here();
                let name = match p.bump() {
                    Some(Tok::Ident(n)) if !RESERVED.contains(&n.as_str()) => n.clone(),
                    other => return Err(p.unexpected_at(nl, nc, other.cloned(), "a binding name")),
                };
                if bound.contains(&name) {
                    return Err(DslError::Syntax {
                        line: nl,
                        col: nc,
                        message: format!("`{name}` is already bound"),
                    });
                }
                p.expect(Tok::Equals, "`=`")?;
                let expr = p.expr()?;
                Statement::Let { name, expr }
            }
            _ => {
                phase = 2;
                Statement::Expr(p.expr()?)
            }
        };
        p.finish()?;
        if let Statement::Let { name, .. } = &st {
            bound.insert(name.clone());
        }
        statements.push(st);
    }
    if phase != 2 {
        let (line, col) = lines.last().map_or((1, 1), |l| (l.end.0 + 1, 1));
        return Err(DslError::Syntax {
            line,
            col,
            message: "program has no result expression".into(),
        });
    }
    Ok(Program { statements })
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
    bound: &'a HashSet<String>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.col))
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn unexpected_at(&self, line: usize, col: usize, found: Option<Tok>, wanted: &str) -> DslError {
        let found = found.map_or_else(|| "end of line".to_string(), |t| t.describe());
        DslError::Syntax {
            line,
            col,
            message: format!("expected {wanted}, found {found}"),
        }
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        let (line, col) = self.here();
        self.unexpected_at(line, col, self.peek().cloned(), wanted)
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), DslError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn finish(&self) -> Result<(), DslError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }

    /// `(a, b, ...)` or `[a, b, ...]` after the opening token has been seen.
    fn arg_list(&mut self, close: Tok) -> Result<Vec<Located>, DslError> {
        let closer = if close == Tok::RParen { "`)`" } else { "`]`" };
        let mut out = Vec::new();
        if self.peek() == Some(&close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let at = self.here();
            out.push((self.arg()?, at));
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(t) if *t == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.unexpected(&format!("`,` or {closer}"))),
            }
        }
    }

    fn arg(&mut self) -> Result<Arg, DslError> {
        let a = match self.peek() {
            Some(Tok::Int(n)) => Arg::Int(*n),
            Some(Tok::Str(s)) => Arg::Id(s.clone()),
            Some(Tok::Ident(s)) if s == "true" => Arg::Bool(true),
            Some(Tok::Ident(s)) if s == "false" => Arg::Bool(false),
            Some(Tok::Ident(s)) if self.bound.contains(s) => Arg::Var(s.clone()),
            Some(Tok::Ident(s)) => Arg::Id(s.clone()),
            Some(Tok::Star | Tok::Question) => Arg::Wild,
            Some(Tok::Cmp(c)) => Arg::Cmp(*c),
            Some(Tok::Equals) => Arg::Cmp(Comparator::Eq),
            Some(Tok::LBracket) => {
                self.pos += 1;
                let items = self.arg_list(Tok::RBracket)?;
                return Ok(Arg::List(items.into_iter().map(|(a, _)| a).collect()));
            }
            _ => return Err(self.unexpected("an argument")),
        };
        self.pos += 1;
        Ok(a)
    }

    fn fact_decl(&mut self) -> Result<FactDecl, DslError> {
        let (line, col) = self.here();
        self.pos += 1;
        self.expect(Tok::LParen, "`(`")?;
        let args = self.arg_list(Tok::RParen)?;
        if args.len() != 5 {
            return Err(DslError::Arity {
                line,
                col,
                name: "fact".into(),
                expected: "5".into(),
                found: args.len(),
            });
        }
        let id = |i: usize| match &args[i].0 {
            Arg::Id(s) => Ok(s.clone()),
            _ => Err(DslError::Syntax {
                line: args[i].1 .0,
                col: args[i].1 .1,
                message: "expected an identifier".into(),
            }),
        };
        let int = |i: usize| match &args[i].0 {
            Arg::Int(n) => Ok(*n),
            _ => Err(DslError::Syntax {
                line: args[i].1 .0,
                col: args[i].1 .1,
                message: "expected an integer year".into(),
            }),
        };
        Ok(FactDecl {
            subject: id(0)?,
            relation: id(1)?,
            object: id(2)?,
            start: int(3)?,
            end: int(4)?,
        })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let head = self.head()?;
        let mut stages = Vec::new();
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            stages.push(self.stage()?);
        }
        Ok(Expr { head, stages })
    }

    fn head(&mut self) -> Result<Head, DslError> {
        let (line, col) = self.here();
        match self.peek() {
            Some(Tok::Ident(k)) if k == "facts" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(`")?;
                let args = self.arg_list(Tok::RParen)?;
                if args.len() != 3 {
                    return Err(DslError::Arity {
                        line,
                        col,
                        name: "facts".into(),
                        expected: "3".into(),
                        found: args.len(),
                    });
                }
                for (a, (l, c)) in &args {
                    if !matches!(a, Arg::Id(_) | Arg::Wild | Arg::Var(_)) {
                        return Err(DslError::Syntax {
                            line: *l,
                            col: *c,
                            message: "expected an identifier or `*`".into(),
                        });
                    }
                }
                let mut it = args.into_iter().map(|(a, _)| a);
                let slots = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
                Ok(Head::Facts(slots))
            }
            Some(Tok::Ident(k)) if k == "call" => {
                self.pos += 1;
                self.call()
            }
            Some(Tok::Ident(v)) if self.bound.contains(v) => {
                self.pos += 1;
                Ok(Head::Var(v.clone()))
            }
            Some(Tok::Ident(v)) => Err(DslError::UnknownIdentifier {
                line,
                col,
                name: v.clone(),
            }),
            _ => Err(self.unexpected("`facts(...)`, `call` or a bound name")),
        }
    }

    fn call(&mut self) -> Result<Head, DslError> {
        let (line, col) = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.unexpected("a function name")),
        };
        self.pos += 1;
        let function = QuestionType::from_str(&name).map_err(|_| DslError::UnknownIdentifier {
            line,
            col,
            name: name.clone(),
        })?;
        let params = params_for(function);
        self.expect(Tok::LParen, "`(`")?;
        let mut args: Vec<CallArg> = Vec::new();
        let mut seen_named = false;
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
        } else {
            loop {
                let (al, ac) = self.here();
                let named = match (self.peek(), self.peek_at(1)) {
                    (Some(Tok::Ident(n)), Some(Tok::Equals)) => Some(n.clone()),
                    _ => None,
                };
                if let Some(n) = &named {
                    self.pos += 2;
                    if !params.iter().any(|p| p.name == n) {
                        return Err(DslError::UnknownIdentifier {
                            line: al,
                            col: ac,
                            name: n.clone(),
                        });
                    }
                    if args.iter().any(|a| a.name.as_deref() == Some(n)) {
                        return Err(DslError::Syntax {
                            line: al,
                            col: ac,
                            message: format!("argument `{n}` given twice"),
                        });
                    }
                    seen_named = true;
                } else if seen_named {
                    return Err(DslError::Syntax {
                        line: al,
                        col: ac,
                        message: "positional argument after a named one".into(),
                    });
                }
                let value = self.arg()?;
                args.push(CallArg { name: named, value });
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
        }
        let positional = args.iter().filter(|a| a.name.is_none()).count();
        if positional > params.len() {
            return Err(DslError::Arity {
                line,
                col,
                name,
                expected: format!("at most {}", params.len()),
                found: positional,
            });
        }
        for (i, a) in args.iter().enumerate().skip(positional) {
            let n = a.name.as_deref().unwrap_or_default();
            if params[..positional].iter().any(|p| p.name == n) {
                return Err(DslError::Syntax {
                    line,
                    col,
                    message: format!("argument `{n}` given twice (argument {})", i + 1),
                });
            }
        }
        Ok(Head::Call { function, args })
    }

    fn stage(&mut self) -> Result<Stage, DslError> {
        let (line, col) = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.unexpected("a stage name")),
        };
        self.pos += 1;
        let op = StageOp::from_name(&name).ok_or(DslError::UnknownIdentifier {
            line,
            col,
            name: name.clone(),
        })?;
        let args = if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            self.arg_list(Tok::RParen)?
        } else {
            Vec::new()
        };
        if !op.arities().contains(&args.len()) {
            let expected = op
                .arities()
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(" or ");
            return Err(DslError::Arity {
                line,
                col,
                name,
                expected,
                found: args.len(),
            });
        }
        check_keywords(op, &args)?;
        Ok(Stage {
            op,
            args: args.into_iter().map(|(a, _)| a).collect(),
        })
    }
}

fn keyword(a: &Located, allowed: &[&str]) -> Result<(), DslError> {
    match &a.0 {
        Arg::Id(s) if allowed.contains(&s.as_str()) => Ok(()),
        _ => Err(DslError::Syntax {
            line: a.1 .0,
            col: a.1 .1,
            message: format!("expected one of: {}", allowed.join(", ")),
        }),
    }
}

fn comparator(a: &Located) -> Result<(), DslError> {
    match &a.0 {
        Arg::Cmp(_) => Ok(()),
        Arg::Id(s) if Comparator::from_str(s).is_ok() => Ok(()),
        _ => Err(DslError::Syntax {
            line: a.1 .0,
            col: a.1 .1,
            message: "expected a comparator (<, <=, =, >=, >)".into(),
        }),
    }
}

fn check_keywords(op: StageOp, args: &[Located]) -> Result<(), DslError> {
    match op {
        StageOp::Sort => {
            keyword(&args[0], &["start", "end"])?;
            keyword(&args[1], &["asc", "desc"])
        }
        StageOp::FilterDur | StageOp::FilterStart | StageOp::Any | StageOp::Compare => {
            comparator(&args[0])
        }
        StageOp::Neighbor => keyword(&args[1], &["before", "after"]),
        StageOp::Sequence => {
            let bad = |m: &str| DslError::Syntax {
                line: args[0].1 .0,
                col: args[0].1 .1,
                message: m.to_string(),
            };
            let Arg::List(steps) = &args[0].0 else {
                return Err(bad("expected a list of [relation, start|end] steps"));
            };
            for s in steps {
                match s {
                    Arg::List(pair)
                        if pair.len() == 2
                            && matches!(&pair[0], Arg::Id(_))
                            && matches!(&pair[1], Arg::Id(e) if e == "start" || e == "end") => {}
                    _ => {
                        return Err(bad(
                            "each step must be [relation, start] or [relation, end]",
                        ))
                    }
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
