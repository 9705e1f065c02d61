//! Arithmetic comparison constraints: `term (= | != | < | <= | > | >=) term`.
//!
//! Terms are integers, variable names, and `+ - *` combinations of them.
//! Operators are left-associative and `*` binds tighter than `+`/`-`.
//! Parentheses are accepted for grouping.

use std::fmt;

use crate::model::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Int(Value),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: Term,
    pub op: Comparator,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(Value),
    Name(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Cmp(Comparator),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let err = |message: String| ParseError { column: col, message };
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let v = lit.parse().map_err(|_| err(format!("integer literal {lit} out of range")))?;
                out.push((col, Tok::Int(v)));
                continue;
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Name(chars[start..i].iter().collect())));
                continue;
            }
            '+' => out.push((col, Tok::Plus)),
            '-' => out.push((col, Tok::Minus)),
            '*' => out.push((col, Tok::Star)),
            '(' => out.push((col, Tok::LParen)),
            ')' => out.push((col, Tok::RParen)),
            '=' => {
                // accept `==` as well
                if chars.get(i + 1) == Some(&'=') {
                    i += 1;
                }
                out.push((col, Tok::Cmp(Comparator::Eq)));
            }
            '!' | '<' | '>' => {
                let eq = chars.get(i + 1) == Some(&'=');
                let op = match (c, eq) {
                    ('!', true) => Comparator::Ne,
                    ('<', true) => Comparator::Le,
                    ('<', false) => Comparator::Lt,
                    ('>', true) => Comparator::Ge,
                    ('>', false) => Comparator::Gt,
                    _ => return Err(err("expected `!=`".into())),
                };
                if eq {
                    i += 1;
                }
                out.push((col, Tok::Cmp(op)));
            }
            '≠' => out.push((col, Tok::Cmp(Comparator::Ne))),
            '≤' => out.push((col, Tok::Cmp(Comparator::Le))),
            '≥' => out.push((col, Tok::Cmp(Comparator::Ge))),
            _ => return Err(err(format!("unexpected character {c:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.column(), message: message.into() })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Term::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Term::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.atom()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            lhs = Term::Mul(Box::new(lhs), Box::new(self.atom()?));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Term::Int(v))
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(Term::Var(n))
            }
            Some(Tok::Minus) if matches!(self.toks.get(self.pos + 1), Some((_, Tok::Int(_)))) => {
                self.pos += 1;
                let Some(Tok::Int(v)) = self.peek().cloned() else { unreachable!() };
                self.pos += 1;
                Ok(Term::Int(-v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.fail("expected an integer, a variable or `(`"),
            None => self.fail("unexpected end of expression"),
        }
    }
}

impl Comparison {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        let mut parser = Parser { toks, pos: 0, end: text.chars().count() + 1 };
        let lhs = parser.term()?;
        let op = match parser.peek() {
            Some(Tok::Cmp(op)) => *op,
            _ => return parser.fail("expected a comparator (=, !=, <, <=, >, >=)"),
        };
        parser.pos += 1;
        let rhs = parser.term()?;
        if parser.peek().is_some() {
            return parser.fail("trailing input after comparison");
        }
        Ok(Comparison { lhs, op, rhs })
    }

    /// Variable names in order of first occurrence.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.lhs.collect_names(&mut out);
        self.rhs.collect_names(&mut out);
        out
    }

    /// Evaluates with exact 128-bit arithmetic. An overflowing side makes the
    /// comparison false.
    pub fn holds(&self, lookup: &dyn Fn(&str) -> Value) -> bool {
        let (Some(a), Some(b)) = (self.lhs.eval(lookup), self.rhs.eval(lookup)) else {
            return false;
        };
        match self.op {
            Comparator::Eq => a == b,
            Comparator::Ne => a != b,
            Comparator::Lt => a < b,
            Comparator::Le => a <= b,
            Comparator::Gt => a > b,
            Comparator::Ge => a >= b,
        }
    }
}

impl Term {
    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Int(_) => {}
            Term::Var(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    fn eval(&self, lookup: &dyn Fn(&str) -> Value) -> Option<i128> {
        match self {
            Term::Int(v) => Some(i128::from(*v)),
            Term::Var(n) => Some(i128::from(lookup(n))),
            Term::Add(a, b) => a.eval(lookup)?.checked_add(b.eval(lookup)?),
            Term::Sub(a, b) => a.eval(lookup)?.checked_sub(b.eval(lookup)?),
            Term::Mul(a, b) => a.eval(lookup)?.checked_mul(b.eval(lookup)?),
        }
    }
}
