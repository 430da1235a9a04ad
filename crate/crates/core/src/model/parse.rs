//! Text syntax for conjunctive queries.
//!
//! ```text
//! query  := ε | clause ("and" clause)*
//! clause := attr "=" value
//!         | attr "in" "{" value ("," value)* "}"
//!         | attr "in" "[" int "," int "]"
//!         | attr ("<" | "<=" | ">" | ">=") int
//! value  := bare-token | "quoted string"
//! ```
//!
//! Keywords are case-insensitive. Values containing whitespace or any of
//! `=,{}[]<>"` must be quoted.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::query::{ConjunctiveQuery, Predicate};
use super::schema::{AttrKind, Schema};
use super::value::Value;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Quoted(String),
    Punct(&'static str),
}

fn is_special(c: char) -> bool {
    c.is_whitespace() || "=,{}[]<>\"".contains(c)
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e)) => s.push(e),
                            None => return Err(Error::QueryParse { pos, msg: "unterminated string".into() }),
                        },
                        Some((_, ch)) => s.push(ch),
                        None => return Err(Error::QueryParse { pos, msg: "unterminated string".into() }),
                    }
                }
                Tok::Quoted(s)
            }
            '<' | '>' => {
                chars.next();
                let eq = chars.next_if(|&(_, n)| n == '=').is_some();
                Tok::Punct(match (c, eq) {
                    ('<', false) => "<",
                    ('<', true) => "<=",
                    ('>', false) => ">",
                    _ => ">=",
                })
            }
            '=' | ',' | '{' | '}' | '[' | ']' => {
                chars.next();
                Tok::Punct(match c {
                    '=' => "=",
                    ',' => ",",
                    '{' => "{",
                    '}' => "}",
                    '[' => "[",
                    _ => "]",
                })
            }
            _ => {
                let mut s = String::new();
                while let Some((_, ch)) = chars.next_if(|&(_, ch)| !is_special(ch)) {
                    s.push(ch);
                }
                Tok::Word(s)
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    schema: &'a Schema,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::QueryParse { pos: self.pos(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, p: &'static str) -> Result<()> {
        match self.peek() {
            Some(Tok::Punct(q)) if *q == p => {
                self.at += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{p}`")),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn value(&mut self, attr: &str, kind: AttrKind) -> Result<Value> {
        let pos = self.pos();
        let text = match self.bump() {
            Some(Tok::Word(w)) | Some(Tok::Quoted(w)) => w,
            _ => return Err(Error::QueryParse { pos, msg: "expected a value".into() }),
        };
        match kind {
            AttrKind::Categorical => Ok(Value::Str(text)),
            AttrKind::Integer => text.parse().map(Value::Int).map_err(|_| Error::QueryParse {
                pos,
                msg: format!("`{text}` is not an integer, as attribute `{attr}` requires"),
            }),
        }
    }

    fn int(&mut self, attr: &str) -> Result<i64> {
        match self.value(attr, AttrKind::Integer)? {
            Value::Int(v) => Ok(v),
            Value::Str(_) => unreachable!(),
        }
    }

    fn clause(&mut self, q: &mut ConjunctiveQuery) -> Result<()> {
        let pos = self.pos();
        let name = match self.bump() {
            Some(Tok::Word(w)) | Some(Tok::Quoted(w)) => w,
            _ => return Err(Error::QueryParse { pos, msg: "expected an attribute name".into() }),
        };
        let attr = self.schema.index_of(&name).ok_or_else(|| Error::UnknownAttribute(name.clone()))?;
        let kind = self.schema.attribute(attr).kind;
        if q.predicates()[attr].is_some() {
            return Err(Error::QueryParse { pos, msg: format!("attribute `{name}` constrained twice") });
        }
        let op_pos = self.pos();
        let pred = if self.keyword("in") {
            match self.peek() {
                Some(Tok::Punct("{")) => {
                    self.at += 1;
                    let mut set = BTreeSet::new();
                    loop {
                        set.insert(self.value(&name, kind)?);
                        if matches!(self.peek(), Some(Tok::Punct(","))) {
                            self.at += 1;
                        } else {
                            break;
                        }
                    }
                    self.expect("}")?;
                    Predicate::OneOf(set)
                }
                Some(Tok::Punct("[")) => {
                    self.at += 1;
                    let lo = self.int(&name)?;
                    self.expect(",")?;
                    let hi = self.int(&name)?;
                    self.expect("]")?;
                    if lo > hi {
                        return Err(Error::InvalidPredicate(format!("range [{lo}, {hi}] on `{name}` has lo > hi")));
                    }
                    Predicate::Range { lo, hi }
                }
                _ => return self.err("expected `{` or `[` after `in`"),
            }
        } else {
            match self.bump() {
                Some(Tok::Punct("=")) => Predicate::OneOf(BTreeSet::from([self.value(&name, kind)?])),
                Some(Tok::Punct(op)) if op.starts_with('<') || op.starts_with('>') => {
                    let bound = self.int(&name)?;
                    let (lo, hi) = match op {
                        "<" => (i64::MIN, bound.checked_sub(1)),
                        "<=" => (i64::MIN, Some(bound)),
                        ">" => (bound.saturating_add(1), (bound < i64::MAX).then_some(i64::MAX)),
                        _ => (bound, Some(i64::MAX)),
                    };
                    let hi = hi.ok_or_else(|| Error::InvalidPredicate(format!("`{name} {op} {bound}` is empty")))?;
                    Predicate::Range { lo, hi }
                }
                _ => {
                    return Err(Error::QueryParse {
                        pos: op_pos,
                        msg: "expected `=`, `in`, `<`, `<=`, `>` or `>=`".into(),
                    })
                }
            }
        };
        q.set(attr, pred)
    }
}

/// Parses `text` into a query over `schema`. The empty string is the all-domain query.
pub fn parse_query(text: &str, schema: &Schema) -> Result<ConjunctiveQuery> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, end: text.len(), schema };
    let mut q = ConjunctiveQuery::all(schema);
    if p.toks.is_empty() {
        return Ok(q);
    }
    loop {
        p.clause(&mut q)?;
        if p.peek().is_none() {
            return Ok(q);
        }
        if !p.keyword("and") {
            return p.err("expected `and`");
        }
    }
}

/// Renders a value so that [`parse_query`] reads it back unchanged.
pub(crate) fn quote(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Str(s) => {
            let bare =
                !s.is_empty() && !s.chars().any(is_special) && !["and", "in"].iter().any(|k| s.eq_ignore_ascii_case(k));
            if bare {
                s.clone()
            } else {
                let mut out = String::with_capacity(s.len() + 2);
                out.push('"');
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        out.push('\\');
                    }
                    out.push(c);
                }
                out.push('"');
                out
            }
        }
    }
}
