//! Text grammar for Laurent polynomials.
//!
//! ```text
//! poly   := [sign] term (sign term)*
//! term   := coeff ('*' var)* | var ('*' var)*
//! var    := 'u' index ['^' [sign] digits]
//! ```
//!
//! Whitespace is insignificant. Variables are 1-based (`u1`, `u2`, ...).

use num_bigint::BigInt;
use num_traits::One;

use super::{GroupRingError, LaurentPoly};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> GroupRingError {
        GroupRingError::Parse { position: self.pos, message: message.into() }
    }

    fn digits(&mut self) -> Result<&'a str, GroupRingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn var(&mut self, exps: &mut Vec<(usize, i64)>) -> Result<(), GroupRingError> {
        if !self.eat(b'u') {
            return Err(self.error("expected variable u<i>"));
        }
        let at = self.pos;
        let index: usize = self.digits()?.parse().map_err(|_| self.error("variable index too large"))?;
        if index == 0 {
            return Err(GroupRingError::Parse { position: at, message: "variables are numbered from 1".into() });
        }
        let mut e = 1i64;
        if self.eat(b'^') {
            let negative = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let v: i64 = self.digits()?.parse().map_err(|_| self.error("exponent too large"))?;
            e = if negative { -v } else { v };
        }
        exps.push((index, e));
        Ok(())
    }
}

/// Parses a polynomial. With `dim = None` the dimension is the largest
/// variable index that occurs (at least 1).
pub fn parse_poly(text: &str, dim: Option<usize>) -> Result<LaurentPoly, GroupRingError> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let mut raw: Vec<(BigInt, Vec<(usize, i64)>)> = Vec::new();
    let mut first = true;
    loop {
        let negative = match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                false
            }
            Some(b'-') => {
                cur.pos += 1;
                true
            }
            None if first => return Err(cur.error("empty polynomial")),
            _ if first => false,
            _ => return Err(cur.error("expected '+' or '-'")),
        };
        first = false;
        let mut coeff = BigInt::one();
        let mut exps = Vec::new();
        match cur.peek() {
            Some(b) if b.is_ascii_digit() => {
                coeff = cur.digits()?.parse().expect("digits parse");
                while cur.eat(b'*') {
                    cur.var(&mut exps)?;
                }
            }
            Some(b'u') => {
                cur.var(&mut exps)?;
                while cur.eat(b'*') {
                    cur.var(&mut exps)?;
                }
            }
            _ => return Err(cur.error("expected coefficient or variable")),
        }
        if negative {
            coeff = -coeff;
        }
        raw.push((coeff, exps));
        if cur.peek().is_none() {
            break;
        }
    }

    let max_index = raw.iter().flat_map(|(_, e)| e.iter().map(|(i, _)| *i)).max().unwrap_or(1);
    let dim = match dim {
        Some(d) if max_index > d => {
            return Err(GroupRingError::Parse {
                position: 0,
                message: format!("variable u{max_index} exceeds dimension {d}"),
            })
        }
        Some(d) => d,
        None => max_index,
    };
    let terms = raw.into_iter().map(|(c, exps)| {
        let mut e = vec![0i64; dim];
        for (i, x) in exps {
            e[i - 1] += x;
        }
        (e, c)
    });
    LaurentPoly::from_terms(dim, terms)
}

impl std::str::FromStr for LaurentPoly {
    type Err = GroupRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s, None)
    }
}
