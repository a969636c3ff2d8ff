//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' natural)?
//! base   := natural ('/' natural)? | variable | '(' expr ')' | '-' factor
//! ```
//!
//! Unary minus takes a whole factor, so `-s1^2` is `-(s1^2)`.

use num_bigint::BigInt;

use super::{MultiPoly, RingSpec};
use crate::error::Error;
use crate::field::Field;

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u32 = 512;

/// Parses `text` into an expanded polynomial of `ring`. Homogeneity is not checked.
pub fn parse_poly(text: &str, ring: RingSpec, field: Field) -> Result<MultiPoly, Error> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
        field,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: RingSpec,
    field: Field,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
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

    fn expr(&mut self) -> Result<MultiPoly, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, Error> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, Error> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let Some(digits) = self.digits() else {
                return Err(self.err("expected exponent"));
            };
            let e: u32 = digits
                .parse()
                .ok()
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or(Error::ExponentOverflow { pos: at })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, Error> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                let f = self.factor()?;
                Ok(f.scalar_mul(&self.field.from_i64(-1)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().unwrap().parse().unwrap();
                let mut den = BigInt::from(1);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let Some(d) = self.digits() else {
                        return Err(self.err("expected denominator"));
                    };
                    den = d.parse().unwrap();
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                }
                let c = self.field.from_ratio(&num, &den)?;
                Ok(MultiPoly::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self.lookup(name).ok_or_else(|| Error::UnknownVariable {
                    pos: start,
                    name: name.to_string(),
                })?;
                Ok(MultiPoly::var(self.ring, self.field, idx))
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
        }
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        let names = self.ring.var_names();
        names.iter().position(|n| *n == name).or_else(|| {
            // X0..X3 may also be written in lower case.
            if self.ring == RingSpec::Target {
                names.iter().position(|n| n.eq_ignore_ascii_case(name))
            } else {
                None
            }
        })
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}
