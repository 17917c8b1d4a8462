//! Text parser for scalars.
//!
//! Accepts integers, the variables `x y l w1..w5`, the shorthands
//! `q = x^2`, `t = y^2`, `p = x^2/y^2`, the operators `+ - * /`, integer
//! powers `^k` (negative allowed) and parentheses. The canonical output of
//! `Display` always parses back to the same value.

use num_bigint::BigInt;

use crate::error::{ArithError, Result};
use crate::monomial::{Var, MAX_W};
use crate::mpoly::MPoly;
use crate::scalar::Scalar;

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

/// Parses an expression that must be a polynomial.
pub fn parse_poly(src: &str) -> Result<MPoly> {
    let s = parse_scalar(src)?;
    if !s.is_polynomial() {
        return Err(ArithError::Domain(format!("not a polynomial: {src}")));
    }
    Ok(s.numerator().clone())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ArithError {
        ArithError::Parse {
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

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|_| self.error("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let e: i32 = digits
                .parse()
                .map_err(|_| self.error("exponent out of range"))?;
            let e = if neg { -e } else { e };
            return base
                .powi(e)
                .map_err(|_| self.error("negative power of zero"));
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

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(Scalar::from_bigint(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "x" => Ok(Scalar::x()),
                    "y" => Ok(Scalar::y()),
                    "l" => Ok(Scalar::l()),
                    "q" => Ok(Scalar::q()),
                    "t" => Ok(Scalar::t()),
                    "p" => Ok(Scalar::p()),
                    w if w.starts_with('w') => match w[1..].parse::<u8>() {
                        Ok(i) if (1..=MAX_W as u8).contains(&i) => Ok(Scalar::var(Var::W(i))),
                        _ => {
                            self.pos = start;
                            Err(self.error("unknown variable"))
                        }
                    },
                    _ => {
                        self.pos = start;
                        Err(self.error("unknown variable"))
                    }
                }
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(parse_scalar("-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(parse_scalar("2*x - 3*x").unwrap().to_string(), "-x");
        assert_eq!(parse_scalar("x^-1").unwrap().to_string(), "(1)/(x)");
        assert_eq!(parse_scalar("q/t").unwrap(), Scalar::p());
        assert_eq!(parse_scalar("w3 * w1").unwrap().to_string(), "w1*w3");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_scalar("x +"), Err(ArithError::Parse { .. })));
        assert!(matches!(parse_scalar("z"), Err(ArithError::Parse { pos: 0, .. })));
        assert!(matches!(parse_scalar("w9"), Err(ArithError::Parse { .. })));
        assert!(matches!(parse_scalar("1/(x - x)"), Err(ArithError::Parse { .. })));
        assert!(matches!(parse_poly("1/x"), Err(ArithError::Domain(_))));
    }

    #[test]
    fn round_trip() {
        for s in ["(3*x^2*y - 1)/(x*y + 2)", "x^3*l - 7", "(-x)/(2*y)", "0", "(1)/(y^4)"] {
            assert_eq!(parse_scalar(s).unwrap().to_string(), s);
        }
    }
}
