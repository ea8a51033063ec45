//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := var | rational | '(' expr ')'
//! var      := ('x' | 'y') nat
//! rational := int ('/' nat)?
//! ```
//!
//! A leading sign on a term (`-x0 + x1`, `x0 - -2`) is also accepted so that
//! canonical printed forms parse back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Polynomial, Rational, Vars};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, vars: &Vars) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.vars.count()
    }

    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax {
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

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.signed_term()?;
        loop {
            if self.eat(b'+') {
                let t = self.signed_term()?;
                acc = &acc + &t;
            } else if self.eat(b'-') {
                let t = self.signed_term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_term(&mut self) -> Result<Polynomial> {
        if self.eat(b'-') {
            Ok(-self.term()?)
        } else {
            self.eat(b'+');
            self.term()
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.nat()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.syntax("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(Polynomial::constant(self.nvars(), r))
            }
            Some(c) if c.is_ascii_alphabetic() => self.var(),
            Some(_) => Err(self.syntax("expected variable, number or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn var(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match self.vars.index_of(name) {
            Some(i) => Ok(Polynomial::var(self.nvars(), i)),
            None => Err(Error::UnknownVariable {
                name: name.to_string(),
                pos: start,
            }),
        }
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.syntax("number too large"))
    }

    fn big_nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .expect("digits"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.big_nat()?;
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            let den = self.big_nat()?;
            if den.is_zero() {
                self.pos = save;
                return Err(self.syntax("zero denominator"));
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::new(num, BigInt::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::print_poly;

    fn v() -> Vars {
        Vars::new(2, 1)
    }

    #[test]
    fn fermat_cubic_has_three_terms() {
        let p = parse_poly("x0^3 + x1^3 + x2^3", &v()).unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn binomial_identity() {
        let p = parse_poly("(x0 + x1)^2 - x0^2 - 2*x0*x1", &v()).unwrap();
        assert_eq!(p, parse_poly("x1^2", &v()).unwrap());
    }

    #[test]
    fn unknown_variable() {
        match parse_poly("x0 + z", &v()) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poly("x3", &v()),
            Err(Error::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse_poly("y2", &v()),
            Err(Error::UnknownVariable { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_poly("x0 + * x1", &v()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("(x0", &v()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x0 x1", &v()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &v()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &v()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rationals_and_whitespace() {
        let p = parse_poly(" 3 / 4 * y1 *x0 ", &v()).unwrap();
        assert_eq!(print_poly(&p, &v()), "3/4*y1*x0");
        let q = parse_poly("-x0 - -2", &v()).unwrap();
        assert_eq!(print_poly(&q, &v()), "-x0 + 2");
    }
}
