//! Text form of polynomial observables.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := power ('*' power)*
//! power := unary ('^' integer)?
//! unary := ('-' | '+') unary | atom
//! atom  := number 'i'? | 'i' | 'A[' j ',' mu ']' | 'Ac[' j ',' mu ']'
//!        | 'x[' mu ']' | 'p[' mu ']' | '(' expr ')'
//! ```
//!
//! `A[j,mu]` is the contravariant amplitude `𝒜^μ(j)` and `Ac[j,mu]` its
//! conjugate. Whitespace is ignored.

use num_complex::Complex64;

use super::{PolyObservable, Var};
use crate::{Error, Result};

pub fn parse(text: &str) -> Result<PolyObservable> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
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
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<PolyObservable> {
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

    fn term(&mut self) -> Result<PolyObservable> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<PolyObservable> {
        let base = self.unary()?;
        if self.eat(b'^') {
            let n = self.integer()?;
            let n = u32::try_from(n).map_err(|_| self.error("exponent too large"))?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<PolyObservable> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<PolyObservable> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                if self.s.get(self.pos) == Some(&b'i') && !self.ident_continues(self.pos + 1) {
                    self.pos += 1;
                    Ok(PolyObservable::constant(Complex64::new(0.0, v)))
                } else {
                    Ok(PolyObservable::real(v))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                match name {
                    "i" => Ok(PolyObservable::constant(Complex64::new(0.0, 1.0))),
                    "A" | "Ac" => {
                        self.expect(b'[')?;
                        let j = self.integer()?;
                        self.expect(b',')?;
                        let mu = self.lorentz_index()?;
                        self.expect(b']')?;
                        Ok(PolyObservable::var(if name == "A" { Var::amp(j, mu) } else { Var::amp_conj(j, mu) }))
                    }
                    "x" | "p" => {
                        self.expect(b'[')?;
                        let mu = self.lorentz_index()? as u8;
                        self.expect(b']')?;
                        Ok(PolyObservable::var(if name == "x" { Var::X(mu) } else { Var::P(mu) }))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(&format!("unknown symbol {name:?}")))
                    }
                }
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.s.get(at).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'[')
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn lorentz_index(&mut self) -> Result<usize> {
        let mu = self.integer()?;
        if mu > 3 {
            return Err(self.error("Lorentz index must be 0..=3"));
        }
        Ok(mu)
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.s.len() && p.s[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.s.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.s.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "malformed number".into(),
            })
    }
}
