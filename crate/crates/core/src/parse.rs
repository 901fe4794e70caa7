//! Term syntax.
//!
//! ```text
//! term := sum
//! sum  := prod { "+" prod }
//! prod := atom { "*" atom }
//! atom := gen | "(" term ")"
//! gen  := "x" digits | letter { letter | digit }
//! ```
//!
//! `xN` always denotes generator N. Other names get indices in order of first
//! occurrence, starting just above the largest `xN` in the text, unless an
//! explicit variable list is supplied, in which case a listed name maps to its
//! 1-based position in the list.

use std::collections::HashMap;

use crate::term::{GeneratorId, TermArena, TermError, TermId};

/// A parsed term before interning: operator nesting exactly as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    Gen(GeneratorId),
    Meet(Vec<RawTerm>),
    Join(Vec<RawTerm>),
}

#[derive(Clone, Debug, Default)]
pub struct VarNames {
    explicit: Option<Vec<String>>,
}

impl VarNames {
    pub fn auto() -> Self {
        Self::default()
    }

    pub fn explicit(names: Vec<String>) -> Self {
        VarNames {
            explicit: Some(names),
        }
    }

    /// Parse a comma separated `--vars` list.
    pub fn from_list(list: &str) -> Self {
        Self::explicit(
            list.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Plus,
    Star,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> TermError {
    TermError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push((pos, Tok::Plus));
            }
            '*' => {
                chars.next();
                out.push((pos, Tok::Star));
            }
            '(' => {
                chars.next();
                out.push((pos, Tok::LParen));
            }
            ')' => {
                chars.next();
                out.push((pos, Tok::RParen));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(name)));
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

fn indexed_name(name: &str) -> Option<&str> {
    let digits = name.strip_prefix('x')?;
    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())).then_some(digits)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    names: &'a VarNames,
    auto: HashMap<String, u32>,
    next_auto: u32,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn sum(&mut self) -> Result<RawTerm, TermError> {
        let mut parts = vec![self.prod()?];
        while self.peek() == Some(&Tok::Plus) {
            self.at += 1;
            parts.push(self.prod()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RawTerm::Join(parts)
        })
    }

    fn prod(&mut self) -> Result<RawTerm, TermError> {
        let mut parts = vec![self.atom()?];
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RawTerm::Meet(parts)
        })
    }

    fn atom(&mut self) -> Result<RawTerm, TermError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let t = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.at += 1;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(RawTerm::Gen(self.resolve(&name, pos)?))
            }
            Some(_) => Err(syntax(pos, "expected a generator or '('")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }

    fn resolve(&mut self, name: &str, pos: usize) -> Result<GeneratorId, TermError> {
        if let Some(list) = &self.names.explicit {
            if let Some(i) = list.iter().position(|n| n == name) {
                return GeneratorId::new(i as u32 + 1);
            }
        }
        if let Some(digits) = indexed_name(name) {
            let index: u32 = digits
                .parse()
                .map_err(|_| syntax(pos, "generator index out of range"))?;
            return GeneratorId::new(index)
                .map_err(|_| syntax(pos, "generator index must be >= 1"));
        }
        if self.names.explicit.is_some() {
            return Err(syntax(pos, format!("'{name}' is not in the variable list")));
        }
        let next = &mut self.next_auto;
        let index = *self.auto.entry(name.to_string()).or_insert_with(|| {
            *next += 1;
            *next
        });
        GeneratorId::new(index)
    }
}

pub fn parse_raw(text: &str, names: &VarNames) -> Result<RawTerm, TermError> {
    let toks = tokenize(text)?;
    let base = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(n) => indexed_name(n).and_then(|d| d.parse::<u32>().ok()),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        names,
        auto: HashMap::new(),
        next_auto: base,
    };
    let t = p.sum()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(t)
}

pub fn parse_term(
    arena: &mut TermArena,
    text: &str,
    names: &VarNames,
) -> Result<TermId, TermError> {
    let raw = parse_raw(text, names)?;
    Ok(arena.intern_raw(&raw))
}

impl TermArena {
    /// Parse with automatic generator naming.
    pub fn parse(&mut self, text: &str) -> Result<TermId, TermError> {
        parse_term(self, text, &VarNames::auto())
    }

    pub fn intern_raw(&mut self, raw: &RawTerm) -> TermId {
        match raw {
            RawTerm::Gen(g) => self.mk_gen(*g),
            RawTerm::Meet(ps) | RawTerm::Join(ps) => {
                let parts: Vec<TermId> = ps.iter().map(|p| self.intern_raw(p)).collect();
                self.build(&parts, matches!(raw, RawTerm::Meet(_)))
            }
        }
    }
}
