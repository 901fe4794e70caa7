//! First-order formulas over the language `{<=}` with equality, and their
//! TPTP and s-expression renderings.
//!
//! Both readers accept exactly what the writers produce (plus whitespace), and
//! `read(write(f)) == f` for every formula built through the smart
//! constructors, which never create one-element conjunctions, one-element
//! disjunctions, or quantifiers over an empty variable list.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Le(String, String),
    Eq(String, String),
    Not(Box<Formula>),
    /// Empty conjunction is `true`.
    And(Vec<Formula>),
    /// Empty disjunction is `false`.
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

pub fn le(a: &str, b: &str) -> Formula {
    Formula::Le(a.to_string(), b.to_string())
}

pub fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq(a.to_string(), b.to_string())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn nle(a: &str, b: &str) -> Formula {
    not(le(a, b))
}

pub fn neq(a: &str, b: &str) -> Formula {
    not(eq(a, b))
}

/// `a < b` as `a <= b & ~(b <= a)`.
pub fn lt(a: &str, b: &str) -> Formula {
    and(vec![le(a, b), nle(b, a)])
}

pub fn and(mut fs: Vec<Formula>) -> Formula {
    if fs.len() == 1 {
        fs.pop().unwrap()
    } else {
        Formula::And(fs)
    }
}

pub fn or(mut fs: Vec<Formula>) -> Formula {
    if fs.len() == 1 {
        fs.pop().unwrap()
    } else {
        Formula::Or(fs)
    }
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
    if vars.is_empty() {
        body
    } else {
        Formula::Forall(vars, Box::new(body))
    }
}

pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
    if vars.is_empty() {
        body
    } else {
        Formula::Exists(vars, Box::new(body))
    }
}

impl Formula {
    /// Total number of connective, quantifier and atom nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Le(..) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn to_tptp(&self) -> String {
        let mut out = String::new();
        write_tptp(self, &mut out);
        out
    }

    pub fn to_sexp(&self) -> String {
        let mut out = String::new();
        write_sexp(self, &mut out);
        out
    }
}

fn is_unit(f: &Formula) -> bool {
    !matches!(f, Formula::Forall(..) | Formula::Exists(..))
}

/// Operand position: quantified formulas get parentheses, everything else
/// already renders as a single unit.
fn write_tptp_unit(f: &Formula, out: &mut String) {
    if is_unit(f) {
        write_tptp(f, out);
    } else {
        out.push('(');
        write_tptp(f, out);
        out.push(')');
    }
}

fn write_tptp(f: &Formula, out: &mut String) {
    match f {
        Formula::Le(a, b) => {
            let _ = write!(out, "le({a},{b})");
        }
        Formula::Eq(a, b) => {
            let _ = write!(out, "({a} = {b})");
        }
        Formula::Not(g) => {
            out.push_str("~ ");
            write_tptp_unit(g, out);
        }
        Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => {
            out.push_str(if matches!(f, Formula::And(_)) {
                "$true"
            } else {
                "$false"
            });
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let op = if matches!(f, Formula::And(_)) {
                " & "
            } else {
                " | "
            };
            out.push('(');
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(op);
                }
                write_tptp_unit(g, out);
            }
            out.push(')');
        }
        Formula::Implies(a, b) => {
            out.push('(');
            write_tptp_unit(a, out);
            out.push_str(" => ");
            write_tptp_unit(b, out);
            out.push(')');
        }
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            out.push(if matches!(f, Formula::Forall(..)) {
                '!'
            } else {
                '?'
            });
            let _ = write!(out, " [{}] : ", vs.join(","));
            write_tptp_unit(body, out);
        }
    }
}

fn write_sexp(f: &Formula, out: &mut String) {
    let list = |out: &mut String, head: &str, fs: &[&Formula]| {
        out.push('(');
        out.push_str(head);
        for g in fs {
            out.push(' ');
            write_sexp(g, out);
        }
        out.push(')');
    };
    match f {
        Formula::Le(a, b) => {
            let _ = write!(out, "(le {a} {b})");
        }
        Formula::Eq(a, b) => {
            let _ = write!(out, "(= {a} {b})");
        }
        Formula::Not(g) => list(out, "not", &[g]),
        Formula::And(fs) => list(out, "and", &fs.iter().collect::<Vec<_>>()),
        Formula::Or(fs) => list(out, "or", &fs.iter().collect::<Vec<_>>()),
        Formula::Implies(a, b) => list(out, "=>", &[a, b]),
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            let head = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            let _ = write!(out, "({head} ({}) ", vs.join(" "));
            write_sexp(body, out);
            out.push(')');
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("formula syntax error at offset {pos}: {msg}")]
pub struct FormulaSyntaxError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 13] = [
    "=>", "$true", "$false", "(", ")", "[", "]", ",", ":", "~", "&", "|", "=",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaSyntaxError> {
    let mut out = Vec::new();
    let mut i = 0;
    let bytes = text.as_bytes();
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        for s in SYMBOLS {
            if text[i..].starts_with(s) {
                out.push((i, Tok::Sym(s)));
                i += s.len();
                continue 'outer;
            }
        }
        let is_word = |c: char| c.is_ascii_alphanumeric() || c == '_';
        if is_word(c) || c == '!' || c == '?' {
            let start = i;
            if c == '!' || c == '?' {
                i += 1;
            } else {
                while i < bytes.len() && is_word(bytes[i] as char) {
                    i += 1;
                }
            }
            out.push((start, Tok::Word(text[start..i].to_string())));
            continue;
        }
        return Err(FormulaSyntaxError {
            pos: i,
            msg: format!("unexpected character '{c}'"),
        });
    }
    Ok(out)
}

struct Reader {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Reader {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormulaSyntaxError> {
        Err(FormulaSyntaxError {
            pos: self.toks.get(self.at).map_or(self.end, |(p, _)| *p),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), FormulaSyntaxError> {
        if self.is_sym(s) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn word(&mut self) -> Result<String, FormulaSyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) => {
                self.at += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn done(&self) -> Result<(), FormulaSyntaxError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    // --- TPTP ---

    fn tptp_formula(&mut self) -> Result<Formula, FormulaSyntaxError> {
        let first = self.tptp_unit()?;
        for (sym, is_and) in [("&", true), ("|", false)] {
            if self.is_sym(sym) {
                let mut items = vec![first];
                while self.is_sym(sym) {
                    self.at += 1;
                    items.push(self.tptp_unit()?);
                }
                return Ok(if is_and {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                });
            }
        }
        if self.is_sym("=>") {
            self.at += 1;
            let rhs = self.tptp_unit()?;
            return Ok(implies(first, rhs));
        }
        Ok(first)
    }

    fn tptp_unit(&mut self) -> Result<Formula, FormulaSyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Sym("(")) => {
                self.at += 1;
                let save = self.at;
                // `(A = B)` is an equation, anything else a parenthesized formula.
                if let (
                    Some(Tok::Word(a)),
                    Some(Tok::Sym("=")),
                    Some(Tok::Word(b)),
                    Some(Tok::Sym(")")),
                ) = (
                    self.toks.get(save).map(|t| t.1.clone()),
                    self.toks.get(save + 1).map(|t| t.1.clone()),
                    self.toks.get(save + 2).map(|t| t.1.clone()),
                    self.toks.get(save + 3).map(|t| t.1.clone()),
                ) {
                    self.at += 4;
                    return Ok(Formula::Eq(a, b));
                }
                let f = self.tptp_formula()?;
                self.expect_sym(")")?;
                Ok(f)
            }
            Some(Tok::Sym("~")) => {
                self.at += 1;
                Ok(not(self.tptp_unit()?))
            }
            Some(Tok::Sym("$true")) => {
                self.at += 1;
                Ok(Formula::And(vec![]))
            }
            Some(Tok::Sym("$false")) => {
                self.at += 1;
                Ok(Formula::Or(vec![]))
            }
            Some(Tok::Word(w)) if w == "!" || w == "?" => {
                self.at += 1;
                self.expect_sym("[")?;
                let mut vars = vec![self.word()?];
                while self.is_sym(",") {
                    self.at += 1;
                    vars.push(self.word()?);
                }
                self.expect_sym("]")?;
                self.expect_sym(":")?;
                let body = Box::new(self.tptp_unit()?);
                Ok(if w == "!" {
                    Formula::Forall(vars, body)
                } else {
                    Formula::Exists(vars, body)
                })
            }
            Some(Tok::Word(w)) if w == "le" => {
                self.at += 1;
                self.expect_sym("(")?;
                let a = self.word()?;
                self.expect_sym(",")?;
                let b = self.word()?;
                self.expect_sym(")")?;
                Ok(Formula::Le(a, b))
            }
            _ => self.err("expected a formula"),
        }
    }

    // --- s-expressions ---

    fn sexp(&mut self) -> Result<Formula, FormulaSyntaxError> {
        self.expect_sym("(")?;
        let head = match self.peek().cloned() {
            Some(Tok::Word(w)) => w,
            Some(Tok::Sym("=")) => "=".to_string(),
            Some(Tok::Sym("=>")) => "=>".to_string(),
            _ => return self.err("expected an operator"),
        };
        self.at += 1;
        let f = match head.as_str() {
            "le" | "=" => {
                let a = self.word()?;
                let b = self.word()?;
                if head == "le" {
                    Formula::Le(a, b)
                } else {
                    Formula::Eq(a, b)
                }
            }
            "not" => not(self.sexp()?),
            "=>" => {
                let a = self.sexp()?;
                implies(a, self.sexp()?)
            }
            "and" | "or" => {
                let mut items = Vec::new();
                while !self.is_sym(")") {
                    items.push(self.sexp()?);
                }
                if head == "and" {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                }
            }
            "forall" | "exists" => {
                self.expect_sym("(")?;
                let mut vars = Vec::new();
                while !self.is_sym(")") {
                    vars.push(self.word()?);
                }
                self.at += 1;
                let body = Box::new(self.sexp()?);
                if head == "forall" {
                    Formula::Forall(vars, body)
                } else {
                    Formula::Exists(vars, body)
                }
            }
            other => return self.err(format!("unknown operator '{other}'")),
        };
        self.expect_sym(")")?;
        Ok(f)
    }
}

pub fn read_tptp_formula(text: &str) -> Result<Formula, FormulaSyntaxError> {
    let mut r = Reader {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let f = r.tptp_formula()?;
    r.done()?;
    Ok(f)
}

pub fn read_sexp_formula(text: &str) -> Result<Formula, FormulaSyntaxError> {
    let mut r = Reader {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let f = r.sexp()?;
    r.done()?;
    Ok(f)
}

/// An annotated TPTP first-order formula: `fof(name, role, formula).`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FofStatement {
    pub name: String,
    pub role: String,
    pub formula: Formula,
}

impl FofStatement {
    pub fn to_tptp(&self) -> String {
        format!(
            "fof({}, {}, {}).\n",
            self.name,
            self.role,
            self.formula.to_tptp()
        )
    }
}

/// Read one or more `fof(...)` statements; `%` comment lines are skipped.
pub fn read_tptp(text: &str) -> Result<Vec<FofStatement>, FormulaSyntaxError> {
    let cleaned: String = text
        .lines()
        .map(|l| {
            if l.trim_start().starts_with('%') {
                ""
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let mut out = Vec::new();
    let mut r = Reader {
        toks: Vec::new(),
        at: 0,
        end: cleaned.len(),
    };
    // '.' only ever terminates a statement
    for (offset, chunk) in split_statements(&cleaned) {
        let mut ts = lex(chunk)?;
        for t in ts.iter_mut() {
            t.0 += offset;
        }
        r.toks = ts;
        r.at = 0;
        r.end = offset + chunk.len();
        match r.word()?.as_str() {
            "fof" => {}
            _ => return r.err("expected 'fof'"),
        }
        r.expect_sym("(")?;
        let name = r.word()?;
        r.expect_sym(",")?;
        let role = r.word()?;
        r.expect_sym(",")?;
        let formula = r.tptp_formula()?;
        r.expect_sym(")")?;
        r.done()?;
        out.push(FofStatement {
            name,
            role,
            formula,
        });
    }
    Ok(out)
}

fn split_statements(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == '.' {
            let chunk = &text[start..i];
            if !chunk.trim().is_empty() {
                out.push((start, chunk));
            }
            start = i + 1;
        }
    }
    if !text[start..].trim().is_empty() {
        out.push((start, &text[start..]));
    }
    out
}
