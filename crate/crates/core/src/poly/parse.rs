//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coefficient | variable ('^' int)? | '(' expr ')' ('^' int)?
//! coefficient := int ('/' positive-int)?
//! variable    := prefix int
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Monomial, QPoly};
use crate::error::{Error, Result};
use crate::field::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str, prefix: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[start..i];
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[digits_start..i];
                if name != prefix {
                    return Err(Error::MixedPrefix {
                        pos: start,
                        expected: prefix.to_string(),
                        found: text[start..i].to_string(),
                    });
                }
                if digits.is_empty() {
                    return Err(Error::Syntax { pos: i, msg: format!("expected index after `{prefix}`") });
                }
                let idx: usize = digits
                    .parse()
                    .map_err(|_| Error::Syntax { pos: digits_start, msg: "variable index too large".into() })?;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Minus) => Err(Error::NegativeExponent { pos: self.offset() }),
            Some(Tok::Int(n)) => {
                let n = n.clone();
                let e = u32::try_from(n).or_else(|_| self.err("exponent too large"))?;
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected exponent"),
        }
    }

    fn factor(&mut self) -> Result<QPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.pos += 1;
                let mut value = Rational::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) if !den.is_zero() => {
                            self.pos += 1;
                            value /= Rational::from_integer(den);
                        }
                        Some(Tok::Int(_)) => return self.err("zero denominator"),
                        _ => return self.err("expected positive denominator"),
                    }
                }
                if self.peek() == Some(&Tok::Caret) {
                    return self.err("exponent on a coefficient");
                }
                Ok(QPoly::constant(value, self.nvars))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                let e = self.exponent()?;
                let mut exps = vec![0; self.nvars];
                exps[i] = e;
                Ok(QPoly::monomial(Rational::from_integer(1.into()), Monomial::new(exps)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(_) => self.err("expected coefficient, variable or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse with the variable count inferred as one more than the largest index
/// (at least one variable).
pub fn parse(text: &str, prefix: &str) -> Result<QPoly> {
    let toks = lex(text, prefix)?;
    let max = toks.iter().filter_map(|(_, t)| if let Tok::Var(i) = t { Some(*i) } else { None }).max();
    run(text, toks, max.map_or(1, |m| m + 1))
}

/// Parse into a ring with exactly `nvars` variables.
pub fn parse_in(text: &str, prefix: &str, nvars: usize) -> Result<QPoly> {
    let toks = lex(text, prefix)?;
    for (_, t) in &toks {
        if let Tok::Var(i) = t {
            if *i >= nvars {
                return Err(Error::IndexOutOfRange { index: *i, nvars });
            }
        }
    }
    run(text, toks, nvars.max(1))
}

fn run(text: &str, toks: Vec<(usize, Tok)>, nvars: usize) -> Result<QPoly> {
    let mut p = Parser { toks: &toks, pos: 0, end: text.len(), nvars };
    if toks.is_empty() {
        return p.err("empty input");
    }
    let out = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected token");
    }
    Ok(out)
}
