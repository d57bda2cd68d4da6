//! Plain-text polynomial syntax.
//!
//! Printing emits `c*v1^e1*...*vk^ek` terms joined by ` + ` / ` - `, with
//! `c` written as `num/den` and omitted when it is one. Parsing accepts that
//! form and ordinary arithmetic on top of it: parentheses, `^` with integer
//! exponents, division by constants and juxtaposition as multiplication
//! (`-a20 a40 (a30 - a60)`).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::mpoly::MPoly;
use super::varset::{is_identifier, VarSet};
use crate::error::{Error, Result};
use crate::rat::Rat;

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !a.is_one() {
                factors.push(a.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars().name(i).to_string()),
                    _ => factors.push(alloc::format!("{}^{}", self.vars().name(i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::usage(alloc::format!("unexpected character `{c}` in polynomial")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a VarSet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))
        )
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| Error::usage("division is only allowed by a nonzero constant"))?;
                acc = acc.scale(&c.recip());
            } else if self.starts_factor() {
                acc = acc * self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .parse()
                        .map_err(|_| Error::usage(alloc::format!("bad exponent `{n}`")))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::usage("exponent must be a non-negative integer literal")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let r: Rat = n
                    .parse()
                    .map_err(|_| Error::usage(alloc::format!("bad number `{n}`")))?;
                Ok(MPoly::constant(self.vars, r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                MPoly::var(self.vars, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::usage("missing `)`"));
                }
                Ok(e)
            }
            other => Err(Error::usage(alloc::format!("unexpected token {other:?}"))),
        }
    }
}

impl MPoly {
    /// Parses `text` over `vars`; unknown identifiers are an error.
    pub fn parse(text: &str, vars: &VarSet) -> Result<MPoly> {
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(Error::usage("empty polynomial"));
        }
        let mut p = Parser { toks, pos: 0, vars };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::usage(alloc::format!("trailing input at token {}", p.pos)));
        }
        Ok(out)
    }

    /// Identifiers in order of first appearance across `texts`.
    pub fn collect_names<S: AsRef<str>>(texts: &[S]) -> Result<Vec<String>> {
        let mut names: Vec<String> = Vec::new();
        for t in texts {
            for tok in tokenize(t.as_ref())? {
                if let Tok::Ident(n) = tok {
                    if is_identifier(&n) && !names.contains(&n) {
                        names.push(n);
                    }
                }
            }
        }
        Ok(names)
    }
}

/// Parses an integer literal into a [`BigInt`] (helper for file formats).
pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::usage(alloc::format!("bad integer `{s}`")))
}
