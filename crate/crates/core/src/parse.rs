//! Expression syntax for elements of F_q[T], F_q(T) and F_q(T){tau}.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | "T" | "z" | "t" | "(" expr ")"
//! ```
//!
//! `t` is tau, `z` the generator of F_q over F_p (only when e > 1). Division is
//! allowed only by a nonzero scalar and acts on the left: `u / c = c^-1 u`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fq::FqContext;
use crate::polya::PolyA;
use crate::ratfunc::{RationalFunc, RationalFunctionField};
use crate::twisted::{TwistedPoly, TwistedRing};

const MAX_TAU_POWER: u64 = 4096;

type Value = TwistedPoly<RationalFunc>;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    k: &'a RationalFunctionField,
    ring: TwistedRing<RationalFunctionField>,
}

impl<'a> Parser<'a> {
    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col0 + at, msg)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn describe(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' {
                self.ring.add(&acc, &rhs)
            } else {
                self.ring.sub(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                self.ring.mul(&acc, &rhs)
            } else {
                if rhs.degree().is_some_and(|d| d > 0) {
                    return Err(self.err(at, "division by an expression involving t"));
                }
                let c = self.ring.d_part(&rhs);
                let inv = self
                    .k
                    .inv(&c)
                    .ok_or_else(|| self.err(at, "division by zero"))?;
                self.ring.scale_left(&inv, &acc)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.ring.neg(&v));
        }
        self.power()
    }

    fn integer(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (self.chars[start..self.pos].iter().collect(), start))
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let Some((digits, _)) = self.integer() else {
            let found = self.describe();
            return Err(self.err(at, format!("expected a non-negative integer exponent, found {found}")));
        };
        let n: u64 = digits
            .parse()
            .map_err(|_| self.err(at, "exponent too large"))?;
        match base.degree() {
            None => Ok(if n == 0 { self.ring.one() } else { base }),
            Some(0) => Ok(self.ring.scalar(self.k.pow(&self.ring.d_part(&base), n))),
            Some(d) => {
                if n.saturating_mul(d as u64) > MAX_TAU_POWER {
                    return Err(self.err(at, format!("tau-degree above {MAX_TAU_POWER}")));
                }
                Ok(self.ring.pow(&base, n as u32))
            }
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    let found = self.describe();
                    return Err(self.err(self.pos, format!("expected `)`, found {found}")));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('T') => {
                self.pos += 1;
                Ok(self.ring.scalar(self.k.t()))
            }
            Some('t') => {
                self.pos += 1;
                Ok(self.ring.tau())
            }
            Some('z') => {
                self.pos += 1;
                let z = self
                    .k
                    .fq()
                    .z()
                    .ok_or_else(|| self.err(at, "`z` requires an extension field (e > 1)"))?;
                Ok(self.ring.scalar(self.k.from_base(z)))
            }
            Some(c) if c.is_ascii_digit() => {
                let (digits, _) = self.integer().expect("digit present");
                let fq = self.k.fq();
                let p = fq.p();
                let v = digits
                    .bytes()
                    .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(self.ring.scalar(self.k.from_base(fq.from_int(v as i64))))
            }
            _ => {
                let found = self.describe();
                Err(self.err(at, format!("expected a number, `T`, `z`, `t` or `(`, found {found}")))
            }
        }
    }
}

/// Parses `src`, reporting errors at `line` with columns offset so that the first
/// character of `src` is column `col`.
pub fn parse_twisted_at(
    k: &RationalFunctionField,
    src: &str,
    line: usize,
    col: usize,
) -> Result<TwistedPoly<RationalFunc>> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        line,
        col0: col,
        k,
        ring: TwistedRing::new(k.clone()),
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        let found = p.describe();
        return Err(p.err(p.pos, format!("unexpected {found}")));
    }
    Ok(v)
}

pub fn parse_twisted(k: &RationalFunctionField, src: &str) -> Result<TwistedPoly<RationalFunc>> {
    parse_twisted_at(k, src, 1, 1)
}

pub fn parse_rational_at(
    k: &RationalFunctionField,
    src: &str,
    line: usize,
    col: usize,
) -> Result<RationalFunc> {
    let v = parse_twisted_at(k, src, line, col)?;
    if v.degree().is_some_and(|d| d > 0) {
        return Err(Error::parse(line, col, "expected an element of F_q(T), found t"));
    }
    Ok(v.coeffs().first().cloned().unwrap_or_else(|| k.zero()))
}

pub fn parse_rational(k: &RationalFunctionField, src: &str) -> Result<RationalFunc> {
    parse_rational_at(k, src, 1, 1)
}

pub fn parse_poly_a(fq: &FqContext, src: &str) -> Result<PolyA> {
    let k = RationalFunctionField::new(fq);
    let x = parse_rational(&k, src)?;
    if !x.is_polynomial() {
        return Err(Error::parse(1, 1, "expected a polynomial in T"));
    }
    Ok(x.num().clone())
}
