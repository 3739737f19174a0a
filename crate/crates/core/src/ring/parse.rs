//! Small expression parser for Laurent polynomials and rational functions.
//!
//! Accepts sums, products, quotients, parentheses and powers. Variables may
//! carry rational exponents written `a^{1/2}` or `a^-3`; parenthesised groups
//! take integer exponents only. The canonical output of `Display` parses back
//! to the same value.

use super::{qint, LaurentPoly, Monomial, Rat, RationalFn, RingError, Var};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    lattice: u32,
}

enum Exp {
    Int(i64),
    Frac(Rat),
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RingError> {
        Err(RingError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn expect(&mut self, c: u8) -> Result<(), RingError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<RationalFn, RingError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn, RingError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.try_mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                acc = acc.try_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn, RingError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFn, RingError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                if self.eat(b'^') {
                    match self.exponent()? {
                        Exp::Int(k) => inner.powi(k),
                        Exp::Frac(_) => self.err("fractional power of a group"),
                    }
                } else {
                    Ok(inner)
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFn::constant(qint(n), self.lattice))
            }
            Some(_) => {
                let v = self.variable()?;
                let e = if self.eat(b'^') {
                    match self.exponent()? {
                        Exp::Int(k) => Rat::from_integer(k),
                        Exp::Frac(r) => r,
                    }
                } else {
                    Rat::from_integer(1)
                };
                let m = LaurentPoly::monomial(Monomial::var(v, e), self.lattice)?;
                Ok(RationalFn::from_poly(m))
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<i64, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match s.parse() {
            Ok(n) => Ok(n),
            Err(_) => self.err("expected integer"),
        }
    }

    fn signed_integer(&mut self) -> Result<i64, RingError> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    fn exponent(&mut self) -> Result<Exp, RingError> {
        let braced = self.eat(b'{');
        let paren = !braced && self.eat(b'(');
        let n = self.signed_integer()?;
        let out = if (braced || paren) && self.eat(b'/') {
            let d = self.integer()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            Exp::Frac(Rat::new(n, d))
        } else {
            Exp::Int(n)
        };
        if braced {
            self.expect(b'}')?;
        } else if paren {
            self.expect(b')')?;
        }
        Ok(match out {
            Exp::Frac(r) if r.is_integer() => Exp::Int(r.to_integer()),
            other => other,
        })
    }

    fn variable(&mut self) -> Result<Var, RingError> {
        self.skip_ws();
        let rest = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("");
        if let Some(stripped) = rest.strip_prefix("ħ") {
            self.pos += rest.len() - stripped.len();
            return Ok(Var::Hbar);
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match Var::parse(name) {
            Some(v) => Ok(v),
            None => {
                self.pos = start;
                self.err(format!("unknown variable '{name}'"))
            }
        }
    }
}

/// Parses a rational function on the lattice `(1/lattice)Z`.
pub fn parse_ratfn(s: &str, lattice: u32) -> Result<RationalFn, RingError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        lattice: lattice.max(1),
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a Laurent polynomial; quotients must divide exactly.
pub fn parse_poly(s: &str, lattice: u32) -> Result<LaurentPoly, RingError> {
    let f = parse_ratfn(s, lattice)?;
    f.to_poly().ok_or_else(|| RingError::Parse {
        pos: 0,
        msg: format!("'{s}' is not a Laurent polynomial"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_canonical() {
        for s in ["1 - 1*h^{1/2}*a^{-1}", "-3/4*a^{2} + 1*z", "0", "7"] {
            let p = parse_poly(s, 2).unwrap();
            assert_eq!(parse_poly(&p.to_string(), 2).unwrap(), p);
        }
    }

    #[test]
    fn quotients() {
        let f = parse_ratfn("(1 - z*a)/((a - 1)*(1 - z))", 1).unwrap();
        let g = parse_ratfn("(z*a - 1)/((a - 1)*(z - 1))", 1).unwrap();
        assert_eq!(f, g);
        assert!(parse_poly("1/(a-1)", 1).is_err());
        assert_eq!(parse_poly("(a^2-1)/(a-1)", 1).unwrap().to_string(), "1 + 1*a");
    }

    #[test]
    fn errors_carry_position() {
        match parse_ratfn("a + y", 1) {
            Err(RingError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_ratfn("(a", 1).is_err());
        assert!(parse_ratfn("(a+1)^{1/2}", 2).is_err());
    }
}
