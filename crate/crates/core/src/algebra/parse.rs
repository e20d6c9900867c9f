//! Recursive-descent parser for polynomial expressions in `x, y, z, w`.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' nat)?
//! atom   := int ('/' nat)? | var | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies, so `3/4x^2y` and `3/4*x^2*y` are the same term.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::MultiPoly;
use super::{AlgebraError, Rational};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse {
            position: self.pos,
            message: message.into(),
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

    fn digits(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if starts_atom(c) => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.digits()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= 64 => e,
                _ => {
                    self.pos = at;
                    return self.err("exponent too large");
                }
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let mut value = Rational::from_integer(num);
                if self.eat(b'/') {
                    let at = self.pos;
                    let den = self.digits()?;
                    if den.is_zero() {
                        self.pos = at;
                        return self.err("zero denominator");
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(MultiPoly::constant(value))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) => match var_index(c) {
                Some(i) => {
                    self.pos += 1;
                    Ok(MultiPoly::var(i))
                }
                None => self.err(format!("unexpected character '{}'", c as char)),
            },
            None => self.err("unexpected end of input"),
        }
    }
}

fn var_index(c: u8) -> Option<usize> {
    match c {
        b'x' => Some(0),
        b'y' => Some(1),
        b'z' => Some(2),
        b'w' => Some(3),
        _ => None,
    }
}

fn starts_atom(c: u8) -> bool {
    c.is_ascii_digit() || c == b'(' || var_index(c).is_some()
}

/// Parses an arbitrary polynomial expression.
pub fn parse_poly(text: &str) -> Result<MultiPoly, AlgebraError> {
    let mut p = Parser::new(text);
    let poly = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(poly)
}

/// Parses a rational literal such as `-3/4`, `7` or `+2/1`.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let p = parse_poly(text)?;
    match p.degree() {
        None => Ok(Rational::zero()),
        Some(0) => Ok(p.coeff(&super::Monomial::ONE)),
        Some(_) => Err(AlgebraError::Parse {
            position: 0,
            message: format!("'{text}' is not a rational number"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::algebra::{parse_cubic, CubicForm};

    #[test]
    fn fermat_reads_first_four() {
        let f = parse_cubic("x^3+y^3+z^3+w^3").unwrap();
        assert_eq!(f, CubicForm::fermat());
    }

    #[test]
    fn cayley_reads_last_four() {
        let f = parse_cubic("x*y*z + x*y*w + x*z*w + y*z*w").unwrap();
        for (i, c) in f.coeffs().iter().enumerate() {
            assert_eq!(c.is_one(), i >= 16, "coefficient c{}", i + 1);
        }
    }

    #[test]
    fn rejects_inhomogeneous() {
        let e = parse_cubic("x^2+y^3").unwrap_err();
        assert_eq!(e.to_string(), "not homogeneous of degree 3");
    }

    #[test]
    fn rational_coefficients_and_parentheses() {
        let f = parse_cubic("3/4x^2y - (x+y)^3 + 2 x y z").unwrap();
        assert_eq!(f.coeff(4).to_string(), "-9/4");
        assert_eq!(f.coeff(16).to_string(), "2");
        assert_eq!(f.coeff(0).to_string(), "-1");
    }

    #[test]
    fn errors_carry_position() {
        match parse_poly("x^3 + 2*q") {
            Err(AlgebraError::Parse { position, .. }) => assert_eq!(position, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("(x+y"), Err(AlgebraError::Parse { position: 4, .. })));
        assert!(matches!(parse_poly("x/0"), Err(AlgebraError::Parse { .. })));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(parse_rational("0").unwrap(), Rational::zero());
        assert!(parse_rational("x").is_err());
    }
}
