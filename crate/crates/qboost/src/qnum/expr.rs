//! Parser for small closed-form expressions in `q`, `Q`, `s` and `i`.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' exponent)?`, where an
//! exponent is a signed integer, optionally parenthesized.

use super::field::Field;
use super::param::parse_rational;
use super::scalar::QScalar;
use super::QnumError;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> QnumError {
        QnumError::Parse(format!("{} at offset {} in `{}`", what, self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QScalar, QnumError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.plus(&self.term()?);
            } else if self.eat('-') {
                acc = acc.minus(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QScalar, QnumError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.times(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.divide(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QScalar, QnumError> {
        if self.eat('-') {
            return Ok(self.unary()?.negated());
        }
        self.power()
    }

    fn power(&mut self) -> Result<QScalar, QnumError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let k: i64 = self.src[start..self.pos].parse().map_err(|_| self.err("expected integer exponent"))?;
        if paren && !self.eat(')') {
            return Err(self.err("expected `)`"));
        }
        let k = if neg { -k } else { k };
        if k < 0 {
            Ok(base.recip()?.pow(k.unsigned_abs() as u32))
        } else {
            Ok(base.pow(k as u32))
        }
    }

    fn atom(&mut self) -> Result<QScalar, QnumError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some('q') => {
                self.pos += 1;
                Ok(QScalar::q())
            }
            Some('Q') => {
                self.pos += 1;
                Ok(QScalar::big_q())
            }
            Some('s') => {
                self.pos += 1;
                Ok(QScalar::s_pow(1))
            }
            Some('i') => {
                self.pos += 1;
                Ok(QScalar::i())
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                Ok(QScalar::real(super::ratfunc::RatFunc::constant(parse_rational(&self.src[start..self.pos])?)))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parse an expression such as `1/(q*Q)` or `q^2/(Q^2-1)` into an exact scalar.
pub fn parse_expr(src: &str) -> Result<QScalar, QnumError> {
    let mut p = Parser { src, pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_golden_forms() {
        let a = parse_expr("1/(q*Q)").unwrap();
        let b = parse_expr("q/Q").unwrap();
        assert!((a + b - QScalar::one()).is_zero());
    }

    #[test]
    fn negative_exponents() {
        let a = parse_expr("q^(-1)*Q/(Q^2-1) + q^2/(Q^2 - 1)").unwrap();
        assert!(a.is_one());
        assert_eq!(parse_expr("s^2").unwrap(), QScalar::q());
    }

    #[test]
    fn imaginary_unit() {
        assert_eq!(parse_expr("i*i").unwrap(), QScalar::int(-1));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("q +").is_err());
        assert!(parse_expr("(q").is_err());
        assert!(parse_expr("q q").is_err());
        assert_eq!(parse_expr("1/(q-q)").unwrap_err(), QnumError::ZeroDenominator);
    }
}
