//! Shared lexing for the per-calculus surface syntaxes, plus the type
//! grammar. All surface syntax is plain ASCII.

use std::fmt;

use thiserror::Error;

use crate::types::SimpleType;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident(String),
    Nat(usize),
    Sym(&'static str),
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::Ident(s) => write!(f, "identifier `{}`", s),
            TokKind::Nat(n) => write!(f, "numeral `{}`", n),
            TokKind::Sym(s) => write!(f, "`{}`", s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tok {
    pub kind: TokKind,
    pub line: usize,
    pub col: usize,
}

const SYMS: &[&str] = &[
    "(", ")", "[", "]", "{", "}", "\\", ".", "/", "!", "^", "*", "|", ":", ",", "-", "<", ">",
];

pub fn lex(input: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let (tline, tcol) = (line, col);
        if c.is_ascii_digit() {
            let mut n = 0usize;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n * 10 + (chars[i] as usize - '0' as usize);
                i += 1;
                col += 1;
            }
            toks.push(Tok { kind: TokKind::Nat(n), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            toks.push(Tok { kind: TokKind::Ident(s), line: tline, col: tcol });
            continue;
        }
        // two-char symbols first
        if c == '-' && i + 1 < chars.len() && chars[i + 1] == '>' {
            toks.push(Tok { kind: TokKind::Sym("->"), line: tline, col: tcol });
            i += 2;
            col += 2;
            continue;
        }
        if c == '<' && i + 1 < chars.len() && chars[i + 1] == '-' {
            toks.push(Tok { kind: TokKind::Sym("<-"), line: tline, col: tcol });
            i += 2;
            col += 2;
            continue;
        }
        let mut matched = false;
        for s in SYMS {
            if s.chars().next() == Some(c) {
                toks.push(Tok { kind: TokKind::Sym(s), line: tline, col: tcol });
                i += 1;
                col += 1;
                matched = true;
                break;
            }
        }
        if !matched {
            return Err(ParseError {
                line: tline,
                col: tcol,
                message: format!("unexpected character `{}`", c),
            });
        }
    }
    Ok(toks)
}

/// Token cursor with the usual peek/bump/expect helpers.
pub struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Cursor {
    pub fn new(input: &str) -> Result<Self, ParseError> {
        let toks = lex(input)?;
        let (end_line, end_col) = toks
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((1, 1));
        Ok(Cursor { toks, pos: 0, end_line, end_col })
    }

    pub fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    pub fn peek2(&self) -> Option<&TokKind> {
        self.toks.get(self.pos + 1).map(|t| &t.kind)
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rewind(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, self.end_col));
        ParseError { line, col, message: message.into() }
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(TokKind::Sym(k)) if *k == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            match self.peek() {
                Some(k) => Err(self.error(format!("expected `{}`, found {}", s, k))),
                None => Err(self.error(format!("expected `{}`, found end of input", s))),
            }
        }
    }

    pub fn eat_ident(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(TokKind::Ident(k)) if k == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(TokKind::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            Some(k) => Err(self.error(format!("expected identifier, found {}", k))),
            None => Err(self.error("expected identifier, found end of input")),
        }
    }

    pub fn expect_nat(&mut self) -> Result<usize, ParseError> {
        match self.peek().cloned() {
            Some(TokKind::Nat(n)) => {
                self.pos += 1;
                Ok(n)
            }
            Some(k) => Err(self.error(format!("expected numeral, found {}", k))),
            None => Err(self.error("expected numeral, found end of input")),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

/// `ty := sub ('->' ty)?` with `->` right associative;
/// `sub := atom ('-' atom)*` left associative;
/// `atom := ident | '(' ty ')'`.
pub fn parse_type(c: &mut Cursor) -> Result<SimpleType, ParseError> {
    let lhs = parse_sub_level(c)?;
    if c.eat_sym("->") {
        let rhs = parse_type(c)?;
        Ok(SimpleType::arrow(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_sub_level(c: &mut Cursor) -> Result<SimpleType, ParseError> {
    let mut acc = parse_type_atom(c)?;
    while matches!(c.peek(), Some(TokKind::Sym("-"))) {
        c.bump();
        let rhs = parse_type_atom(c)?;
        acc = SimpleType::sub(acc, rhs);
    }
    Ok(acc)
}

fn parse_type_atom(c: &mut Cursor) -> Result<SimpleType, ParseError> {
    if c.eat_sym("(") {
        let ty = parse_type(c)?;
        c.expect_sym(")")?;
        return Ok(ty);
    }
    match c.peek().cloned() {
        Some(TokKind::Ident(s)) => {
            c.bump();
            Ok(SimpleType::Base(s))
        }
        Some(k) => Err(c.error(format!("expected a type, found {}", k))),
        None => Err(c.error("expected a type, found end of input")),
    }
}

pub fn type_of_str(input: &str) -> Result<SimpleType, ParseError> {
    let mut c = Cursor::new(input)?;
    let ty = parse_type(&mut c)?;
    c.expect_end()?;
    Ok(ty)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_round_trips() {
        for s in ["i", "i -> i", "(i -> i) -> i", "i -> i -> i", "i - i", "(i - i) -> i"] {
            let ty = type_of_str(s).unwrap();
            assert_eq!(ty.to_string(), s);
            assert_eq!(type_of_str(&ty.to_string()).unwrap(), ty);
        }
    }

    #[test]
    fn arrow_is_right_assoc() {
        assert_eq!(
            type_of_str("i -> i -> i").unwrap(),
            SimpleType::arrow(SimpleType::iota(), SimpleType::arrow(SimpleType::iota(), SimpleType::iota()))
        );
    }

    #[test]
    fn errors_carry_position() {
        let err = type_of_str("i ->").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col >= 4);
    }
}
