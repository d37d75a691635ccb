//! Formula text grammar.
//!
//! ```text
//! formula  ::= disj ( "->" formula )?
//! disj     ::= conj ( "|" conj )*
//! conj     ::= binary ( "&" binary )*
//! binary   ::= unary ( ("U" | "R" | "S") binary )?
//! unary    ::= ("!" | "X" | "N" | "F" | "G" | "Y") unary | primary
//! primary  ::= "true" | "false" | ident | "(" formula ")"
//! ident    ::= [A-Za-z_][A-Za-z0-9_]*   (excluding the keywords)
//! ```
//!
//! `X N U R F G` belong to the LTLf dialect and `Y S` to the past dialect;
//! the other dialect's operators are rejected. `F φ` and `G φ` are expanded
//! to `true U φ` and `false R φ` while parsing.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::formula::{Ltlf, Name, Pltlf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Ltlf,
    Pltlf,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {position}")]
    UnexpectedChar { position: usize, ch: char },
    #[error("expected {expected} at offset {position}, found {found}")]
    Unexpected { position: usize, expected: &'static str, found: String },
    #[error("operator `{op}` at offset {position} is not part of the {dialect} dialect")]
    WrongDialect { position: usize, op: &'static str, dialect: &'static str },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnexpectedChar { position, .. }
            | ParseError::Unexpected { position, .. }
            | ParseError::WrongDialect { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    /// One of the temporal keywords, by its spelling.
    Op(&'static str),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        use alloc::format;
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Op(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
        }
    }
}

const KEYWORDS: [&str; 8] = ["X", "N", "U", "R", "F", "G", "Y", "S"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' | b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            c if c == b'_' || c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1] == b'_' || bytes[i + 1].is_ascii_alphanumeric()) {
                    i += 1;
                }
                let word = &text[start..=i];
                match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    w => match KEYWORDS.iter().find(|k| **k == w) {
                        Some(k) => Tok::Op(k),
                        None => Tok::Ident(w.into()),
                    },
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::UnexpectedChar { position: start, ch });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// Syntax shared by both dialects; converted to the typed AST at the end.
enum Raw {
    True,
    False,
    Atom(Name),
    Not(Box<Raw>),
    Bin(Tok, Box<Raw>, Box<Raw>),
    Unary(&'static str, Box<Raw>),
    Temporal(&'static str, Box<Raw>, Box<Raw>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected { position: self.offset(), expected, found: self.peek().describe() }
    }

    fn check_dialect(&self, op: &'static str) -> Result<(), ParseError> {
        let future = matches!(op, "X" | "N" | "U" | "R" | "F" | "G");
        let (ok, dialect) = match self.dialect {
            Dialect::Ltlf => (future, "LTLf"),
            Dialect::Pltlf => (!future, "PLTLf"),
        };
        if ok {
            Ok(())
        } else {
            Err(ParseError::WrongDialect { position: self.offset(), op, dialect })
        }
    }

    fn formula(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Raw::Bin(Tok::Implies, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            lhs = Raw::Bin(Tok::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.binary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.binary()?;
            lhs = Raw::Bin(Tok::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn binary(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.unary()?;
        if let Tok::Op(op @ ("U" | "R" | "S")) = *self.peek() {
            self.check_dialect(op)?;
            self.bump();
            let rhs = self.binary()?;
            return Ok(Raw::Temporal(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        match *self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Tok::Op(op @ ("X" | "N" | "F" | "G" | "Y")) => {
                self.check_dialect(op)?;
                self.bump();
                Ok(Raw::Unary(op, Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Raw::True)
            }
            Tok::False => {
                self.bump();
                Ok(Raw::False)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Raw::Atom(Name::from(name.as_str())))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

fn parse_raw(text: &str, dialect: Dialect) -> Result<Raw, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, dialect };
    let raw = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(raw)
}

fn to_ltlf(raw: Raw) -> Ltlf {
    let arc = |r: Box<Raw>| Arc::new(to_ltlf(*r));
    match raw {
        Raw::True => Ltlf::True,
        Raw::False => Ltlf::False,
        Raw::Atom(n) => Ltlf::Atom(n),
        Raw::Not(a) => Ltlf::Not(arc(a)),
        Raw::Bin(Tok::And, a, b) => Ltlf::And(arc(a), arc(b)),
        Raw::Bin(Tok::Or, a, b) => Ltlf::Or(arc(a), arc(b)),
        Raw::Bin(_, a, b) => Ltlf::Implies(arc(a), arc(b)),
        Raw::Unary("X", a) => Ltlf::Next(arc(a)),
        Raw::Unary("N", a) => Ltlf::WeakNext(arc(a)),
        Raw::Unary("F", a) => to_ltlf(*a).eventually(),
        Raw::Unary(_, a) => to_ltlf(*a).globally(),
        Raw::Temporal("U", a, b) => Ltlf::Until(arc(a), arc(b)),
        Raw::Temporal(_, a, b) => Ltlf::Release(arc(a), arc(b)),
    }
}

fn to_pltlf(raw: Raw) -> Pltlf {
    let arc = |r: Box<Raw>| Arc::new(to_pltlf(*r));
    match raw {
        Raw::True => Pltlf::True,
        Raw::False => Pltlf::False,
        Raw::Atom(n) => Pltlf::Atom(n),
        Raw::Not(a) => Pltlf::Not(arc(a)),
        Raw::Bin(Tok::And, a, b) => Pltlf::And(arc(a), arc(b)),
        Raw::Bin(Tok::Or, a, b) => Pltlf::Or(arc(a), arc(b)),
        // a -> b as !a | b; the past syntax has no implication node
        Raw::Bin(_, a, b) => Pltlf::Or(Arc::new(Pltlf::Not(arc(a))), arc(b)),
        Raw::Unary(_, a) => Pltlf::Yesterday(arc(a)),
        Raw::Temporal(_, a, b) => Pltlf::Since(arc(a), arc(b)),
    }
}

pub fn parse_ltlf(text: &str) -> Result<Ltlf, ParseError> {
    parse_raw(text, Dialect::Ltlf).map(to_ltlf)
}

pub fn parse_pltlf(text: &str) -> Result<Pltlf, ParseError> {
    parse_raw(text, Dialect::Pltlf).map(to_pltlf)
}

impl core::str::FromStr for Ltlf {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ltlf(s)
    }
}

impl core::str::FromStr for Pltlf {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pltlf(s)
    }
}
