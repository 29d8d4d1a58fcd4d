//! Parser for polynomials in the generators `Q1, Q2, ...`:
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := [rational] ('*'? 'Q' index ('^' exponent)?)*
//! rational   := integer ('/' positive-integer)?
//! ```
//!
//! Whitespace is ignored everywhere. A leading sign on the first term is
//! accepted.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::brackets::ShiftedSymmetricPoly;
use crate::error::{Error, Result};

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    source: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(source: &'a str) -> Self {
        let chars = source.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Cursor { chars, pos: 0, source }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    /// Byte offset of the next significant character (end of input if none).
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.source.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), message: message.into() })
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        text.parse().ok()
    }

    fn small_number(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        match self.digits() {
            Some(n) => u32::try_from(n)
                .map_err(|_| Error::Parse { pos: at, message: format!("{what} is too large") }),
            None => Err(Error::Parse { pos: at, message: format!("expected {what}") }),
        }
    }
}

pub fn parse_q_polynomial(text: &str) -> Result<ShiftedSymmetricPoly> {
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return cur.error("empty expression");
    }
    let mut sign = Rational::one();
    match cur.peek() {
        Some('-') => {
            cur.bump();
            sign = -sign;
        }
        Some('+') => {
            cur.bump();
        }
        _ => {}
    }
    let mut acc = parse_term(&mut cur)?.scale(&sign);
    while let Some(c) = cur.peek() {
        let sign = match c {
            '+' => Rational::one(),
            '-' => -Rational::one(),
            other => return cur.error(format!("unexpected '{other}'")),
        };
        cur.bump();
        acc = acc.add(&parse_term(&mut cur)?.scale(&sign));
    }
    Ok(acc)
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<ShiftedSymmetricPoly> {
    let start = cur.offset();
    let mut coefficient = Rational::one();
    let mut seen = false;
    if let Some(numer) = cur.digits() {
        seen = true;
        let mut denom = BigInt::one();
        if cur.peek() == Some('/') {
            cur.bump();
            let at = cur.offset();
            denom = cur.digits().ok_or(Error::Parse { pos: at, message: "expected denominator".into() })?;
            if denom.is_zero() {
                return Err(Error::Parse { pos: at, message: "zero denominator".into() });
            }
        }
        coefficient = Rational::new(numer, denom);
    }
    let mut poly = ShiftedSymmetricPoly::constant(coefficient);
    loop {
        let star = cur.peek() == Some('*');
        if star {
            if !seen {
                return cur.error("'*' without a left factor");
            }
            cur.bump();
        }
        if cur.peek() != Some('Q') {
            if star {
                return cur.error("expected 'Q' after '*'");
            }
            break;
        }
        cur.bump();
        let at = cur.offset();
        let index = cur.small_number("generator index")?;
        if index == 0 {
            return Err(Error::Parse { pos: at, message: "Q0 is not a generator".into() });
        }
        let mut exponent = 1;
        if cur.peek() == Some('^') {
            cur.bump();
            exponent = cur.small_number("exponent")?;
        }
        let factor = ShiftedSymmetricPoly::generator(index)?.pow(exponent);
        poly = poly.multiply(&factor);
        seen = true;
    }
    if !seen {
        return Err(Error::Parse { pos: start, message: "expected a coefficient or a generator".into() });
    }
    Ok(poly)
}
