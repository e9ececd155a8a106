//! Tokenizer. Works one physical line at a time; positions are 1-based and
//! counted in characters.

use super::DslError;
use crate::primitives::Comparator;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Pipe,
    Star,
    Question,
    /// `=`: assignment, named argument or equality comparator by context.
    Equals,
    Cmp(Comparator),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Pipe => "`|>`".into(),
            Tok::Star => "`*`".into(),
            Tok::Question => "`?`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Cmp(c) => format!("`{}`", c.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')
}

pub(crate) fn lex_line(text: &str, line: usize) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| DslError::Syntax { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let peek = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            ',' => (Tok::Comma, 1),
            '*' => (Tok::Star, 1),
            '?' => (Tok::Question, 1),
            '|' if peek == Some('>') => (Tok::Pipe, 2),
            '<' if peek == Some('=') => (Tok::Cmp(Comparator::Le), 2),
            '>' if peek == Some('=') => (Tok::Cmp(Comparator::Ge), 2),
            '<' => (Tok::Cmp(Comparator::Lt), 1),
            '>' => (Tok::Cmp(Comparator::Gt), 1),
            '≤' => (Tok::Cmp(Comparator::Le), 1),
            '≥' => (Tok::Cmp(Comparator::Ge), 1),
            '=' => (Tok::Equals, 1),
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => return Err(err(col, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match chars.get(j + 1) {
                            Some(e @ ('"' | '\\')) => {
                                s.push(*e);
                                j += 2;
                            }
                            _ => return Err(err(j + 1, "invalid escape in string".into())),
                        },
                        Some(ch) => {
                            s.push(*ch);
                            j += 1;
                        }
                    }
                }
                (Tok::Str(s), j + 1 - i)
            }
            c if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|p| p.is_ascii_digit())) => {
                let mut j = i + 1;
                while chars.get(j).is_some_and(|d| d.is_ascii_digit()) {
                    j += 1;
                }
                if chars.get(j).is_some_and(|d| is_ident_continue(*d)) {
                    return Err(err(col, "malformed number".into()));
                }
                let digits: String = chars[i..j].iter().collect();
                let n = digits
                    .parse::<i64>()
                    .map_err(|_| err(col, format!("integer `{digits}` out of range")))?;
                (Tok::Int(n), j - i)
            }
            c if is_ident_start(c) => {
                let mut j = i + 1;
                while chars.get(j).is_some_and(|d| is_ident_continue(*d)) {
                    j += 1;
                }
                (Tok::Ident(chars[i..j].iter().collect()), j - i)
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, line, col });
        i += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex_line(s, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("facts(E1, *, ?) |> filter_dur(>=, -3)"),
            vec![
                Tok::Ident("facts".into()),
                Tok::LParen,
                Tok::Ident("E1".into()),
                Tok::Comma,
                Tok::Star,
                Tok::Comma,
                Tok::Question,
                Tok::RParen,
                Tok::Pipe,
                Tok::Ident("filter_dur".into()),
                Tok::LParen,
                Tok::Cmp(Comparator::Ge),
                Tok::Comma,
                Tok::Int(-3),
                Tok::RParen,
            ]
        );
    }

    #[test]
    fn strings_and_errors() {
        assert_eq!(toks(r#""a \"b\"""#), vec![Tok::Str("a \"b\"".into())]);
        assert!(matches!(
            lex_line("x # y", 4),
            Err(DslError::Syntax {
                line: 4,
                col: 3,
                ..
            })
        ));
        assert!(lex_line("\"open", 1).is_err());
        assert!(lex_line("12ab", 1).is_err());
    }
}
