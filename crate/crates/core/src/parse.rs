//! Polynomial text syntax: `x^2*y + 3*y^3 - 1`.
//!
//! Terms are joined by `+`/`-`; products are written with `*` or by
//! juxtaposition; `^` takes a nonnegative integer exponent; parentheses group.
//! An identifier that is not a declared variable is split greedily into
//! declared names, so `xy` reads as `x*y` in a ring with variables `x, y`.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::Ring;

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.power()?)?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = acc.try_mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            return base.pow(k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("integer too large")
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let p = self.ring.characteristic();
                Ok(Polynomial::constant(self.ring, (v % p) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.identifier(ident, start)
            }
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn identifier(&mut self, ident: &str, start: usize) -> Result<Polynomial> {
        if let Some(i) = self.ring.var_index(ident) {
            return Ok(Polynomial::var(self.ring, i));
        }
        // greedy split into declared variable names
        let mut acc = Polynomial::one(self.ring);
        let mut rest = ident;
        while !rest.is_empty() {
            let best = self
                .ring
                .vars()
                .iter()
                .enumerate()
                .filter(|(_, v)| rest.starts_with(v.as_str()))
                .max_by_key(|(_, v)| v.len());
            match best {
                Some((i, v)) => {
                    acc = acc.try_mul(&Polynomial::var(self.ring, i))?;
                    rest = &rest[v.len()..];
                }
                None => {
                    self.pos = start;
                    return self.err(format!("unknown variable {ident:?}"));
                }
            }
        }
        Ok(acc)
    }
}

/// Parses one polynomial over `ring`.
pub fn parse_polynomial(ring: &Ring, text: &str) -> Result<Polynomial> {
    let mut parser = Parser { ring, src: text.as_bytes(), pos: 0 };
    let f = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err("trailing input");
    }
    Ok(f)
}

/// Parses a comma-separated list of polynomials.
pub fn parse_polynomial_list(ring: &Ring, text: &str) -> Result<Vec<Polynomial>> {
    let mut parser = Parser { ring, src: text.as_bytes(), pos: 0 };
    let mut out = vec![parser.expr()?];
    loop {
        match parser.peek() {
            None => return Ok(out),
            Some(b',') => {
                parser.pos += 1;
                out.push(parser.expr()?);
            }
            Some(_) => return parser.err("expected ',' or end of input"),
        }
    }
}
