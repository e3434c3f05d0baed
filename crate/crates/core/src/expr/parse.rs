//! Text syntax for [`MeroExpr`].
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('+' | '-') unary | power
//! power    := atom ('^' exponent)?
//! exponent := ('+' | '-')? number | '(' expr ')'        -- must be a real constant
//! atom     := number 'i'? | 'i' | 'pi' | 'z' | '(' expr ')'
//! number   := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! A non-integer exponent is only allowed on `z` or on a linear factor
//! `(z - p)` / `(z + p)`; integer exponents apply to any base.

use num_complex::Complex64;

use super::{is_integer, snap_exponent, MeroExpr};
use crate::error::{Error, Result};

pub fn parse(src: &str) -> Result<MeroExpr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e.simplify())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<MeroExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MeroExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MeroExpr> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<MeroExpr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.exponent()?;
        apply_power(base, e).ok_or(Error::Parse { pos: at, msg: "non-integer exponent requires base z or (z - p)".into() })
    }

    fn exponent(&mut self) -> Result<f64> {
        let c = if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            e.as_const().ok_or_else(|| self.err("exponent must be constant"))?
        } else {
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            self.skip_ws();
            let v = self.number()?;
            Complex64::new(if neg { -v } else { v }, 0.0)
        };
        if c.im != 0.0 {
            return Err(self.err("exponent must be real"));
        }
        Ok(c.re)
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            let st = *p;
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > st
        };
        let mut p = self.pos;
        let mut any = digits(&mut p);
        if p < s.len() && s[p] == b'.' {
            p += 1;
            any |= digits(&mut p);
        }
        if !any {
            return Err(self.err("expected number"));
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            }
        }
        self.pos = p;
        std::str::from_utf8(&s[start..p])
            .ok()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or(Error::Parse { pos: start, msg: "bad number".into() })
    }

    fn atom(&mut self) -> Result<MeroExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(MeroExpr::Var)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(MeroExpr::constant(Complex64::new(0.0, 1.0)))
            }
            Some(b'p') if self.src[self.pos..].starts_with(b"pi") => {
                self.pos += 2;
                Ok(MeroExpr::real(std::f64::consts::PI))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(MeroExpr::constant(Complex64::new(0.0, v)))
                } else {
                    Ok(MeroExpr::real(v))
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// `z - p` written as a sum, if `e` has that shape.
fn linear_center(e: &MeroExpr) -> Option<Complex64> {
    match e {
        MeroExpr::Var => Some(Complex64::new(0.0, 0.0)),
        MeroExpr::Sum(v) if v.len() == 2 => match (&v[0], &v[1]) {
            (MeroExpr::Var, MeroExpr::Const(c)) | (MeroExpr::Const(c), MeroExpr::Var) => Some(-c),
            _ => None,
        },
        _ => None,
    }
}

fn apply_power(base: MeroExpr, e: f64) -> Option<MeroExpr> {
    let e = snap_exponent(e);
    if let Some(p) = linear_center(&base) {
        return Some(MeroExpr::power(p, e));
    }
    if let MeroExpr::Power { center, exponent } = base {
        return Some(MeroExpr::power(center, exponent * e));
    }
    if let Some(c) = base.as_const() {
        return Some(MeroExpr::constant(if is_integer(e) { c.powi(e as i32) } else { c.powf(e) }));
    }
    if is_integer(e) && e.abs() < i32::MAX as f64 {
        return Some(base.int_pow(e as i32));
    }
    None
}
