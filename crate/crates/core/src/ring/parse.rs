//! Recursive-descent parser for ring element expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```

use super::{Element, Ring};
use crate::error::{Error, Result};

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

pub(super) fn parse_element(ring: &Ring, text: &str) -> Result<Element> {
    let mut p = Parser { ring, src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
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

    fn expr(&mut self) -> Result<Element> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Element> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| Error::Parse {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Element> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                // reduce digit by digit so long literals never overflow
                let zn = self.ring.zn();
                let value = self
                    .digits()
                    .bytes()
                    .fold(0u64, |acc, d| zn.add(zn.mul(acc, 10 % zn.n), (d - b'0') as u64 % zn.n));
                Ok(self.ring.from_int(value as i64))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.ring.var(name)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_signs() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let e = r.parse("-(x + z)^2 * 2").unwrap();
        assert_eq!(e, r.parse("3*x^2 + x*z + 3*z^2").unwrap());
        assert_eq!(r.parse("--z").unwrap(), r.parse("z").unwrap());
    }

    #[test]
    fn errors() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        assert!(matches!(r.parse("x +"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("(x"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("x $ y"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(r.parse("w"), Err(Error::UnknownVariable(v)) if v == "w"));
        assert!(matches!(r.parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn long_literals_reduce() {
        let r = Ring::z_mod(2, 3).unwrap();
        assert_eq!(r.parse("123456789012345678901234567890").unwrap(), r.from_int(2));
    }
}
