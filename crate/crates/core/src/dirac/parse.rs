//! Polynomial literals such as `p1 + (G/2)*x2` or `G^2/(2K)`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' '-'? int)?
//! atom  := number ident? | ident | '(' expr ')'
//! ```
//!
//! A number directly followed by an identifier (`2K`) is a product that binds
//! tighter than `*` and `/`. Division is allowed only by a monomial constant.

use num_rational::BigRational;

use super::poly::{PhasePolynomial, Var};
use super::scalar::{Coeff, Symbol};
use crate::error::{Error, Result};
use crate::exact::parse_rational;

pub fn parse_poly(text: &str) -> Result<PhasePolynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse an expression that must not depend on phase-space variables.
pub fn parse_coeff(text: &str) -> Result<Coeff> {
    let p = parse_poly(text)?;
    p.as_constant().ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("expected a scalar expression, got {p}"),
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PhasePolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PhasePolynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                let inv = rhs.as_constant().and_then(|c| c.inverse().ok()).ok_or(Error::Parse {
                    pos: at,
                    msg: format!("cannot divide by {rhs}"),
                })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<PhasePolynomial> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<PhasePolynomial> {
        let base = self.atom()?;
        self.power_of(base)
    }

    fn atom(&mut self) -> Result<PhasePolynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let n = self.number()?;
                // implicit product: 2K, 3x1
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    let id = self.ident()?;
                    let factor = self.power_of(id)?;
                    return Ok(factor.scale(&n));
                }
                Ok(PhasePolynomial::constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Apply an optional `^n` to `base`; also used right after the identifier
    /// of an implicit product so that `2K^2` means 2·K².
    fn power_of(&mut self, base: PhasePolynomial) -> Result<PhasePolynomial> {
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let n: u32 = std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.error("expected integer exponent"))?;
        if !neg {
            return Ok(base.pow(n));
        }
        let c = base
            .as_constant()
            .ok_or_else(|| self.error("negative power of a phase-space variable"))?;
        Ok(PhasePolynomial::constant(c.pow(-(n as i32))?))
    }

    fn number(&mut self) -> Result<Coeff> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        // lowercase exponent only, so `2E` stays the product 2·E
        if self.pos + 1 < self.src.len() && self.src[self.pos] == b'e' {
            let mut q = self.pos + 1;
            if q < self.src.len() && (self.src[q] == b'-' || self.src[q] == b'+') {
                q += 1;
            }
            if q < self.src.len() && self.src[q].is_ascii_digit() {
                while q < self.src.len() && self.src[q].is_ascii_digit() {
                    q += 1;
                }
                self.pos = q;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if text.chars().filter(|&c| c == '.').count() > 1 {
            return Err(Error::Parse {
                pos: start,
                msg: format!("malformed number {text:?}"),
            });
        }
        let r: BigRational = parse_rational(text).map_err(|_| Error::Parse {
            pos: start,
            msg: format!("malformed number {text:?}"),
        })?;
        Ok(Coeff::rational(r))
    }

    fn ident(&mut self) -> Result<PhasePolynomial> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(v) = Var::from_name(name) {
            return Ok(PhasePolynomial::var(v));
        }
        if let Some(s) = Symbol::from_name(name) {
            return Ok(PhasePolynomial::constant(Coeff::symbol(s)));
        }
        Err(Error::Parse {
            pos: start,
            msg: format!("unknown identifier {name:?}"),
        })
    }
}
