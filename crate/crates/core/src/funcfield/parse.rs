//! Text forms: `t^2+2*t+1`, `c0 + c1*t`, `num / den`, places as polynomials or `inf`.

use super::factor::is_irreducible;
use super::place::Place;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

pub fn parse_ratfunc(s: &str, p: u32) -> Result<RatFunc> {
    let mut parser = Parser { chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, p, src: s };
    if parser.chars.is_empty() {
        return Err(Error::input("empty expression"));
    }
    let v = parser.quotient()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.err("unexpected character"));
    }
    Ok(v)
}

pub fn parse_poly(s: &str, p: u32) -> Result<Poly> {
    let v = parse_ratfunc(s, p)?;
    if !v.is_poly() {
        return Err(Error::input(format!("`{s}` is not a polynomial")));
    }
    Ok(v.num().clone())
}

pub fn parse_place(s: &str, p: u32) -> Result<Place> {
    let s = s.trim();
    if s == "inf" || s == "infinity" {
        return Ok(Place::Infinity);
    }
    let pi = parse_poly(s, p)?;
    if !pi.is_monic() || !is_irreducible(&pi) {
        return Err(Error::input(format!("place `{s}` is not a monic irreducible polynomial")));
    }
    Ok(Place::Finite(pi))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    p: u32,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::input(format!("{what} at position {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('t') | Some('(') => acc = &acc * &self.unary()?,
                Some(c) if c.is_ascii_digit() => acc = &acc * &self.unary()?,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek() == Some('+') {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let e = self.integer()?;
        let e = i64::try_from(e).map_err(|_| self.err("exponent too large"))?;
        if neg {
            if base.is_zero() {
                return Err(self.err("division by zero"));
            }
            Ok(base.pow(-e))
        } else {
            Ok(base.pow(e))
        }
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(RatFunc::t(self.p))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.quotient()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::constant((n % self.p as u64) as i64, self.p))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    // A `/` separates numerator and denominator sums, so `t+1/t-1` reads as
    // (t+1)/(t-1). Inside parentheses the same rule applies.
    fn quotient(&mut self) -> Result<RatFunc> {
        let num = self.expr()?;
        if self.peek() != Some('/') {
            return Ok(num);
        }
        self.pos += 1;
        let den = self.expr()?;
        if den.is_zero() {
            return Err(self.err("division by zero"));
        }
        if self.peek() == Some('/') {
            return Err(self.err("more than one `/`"));
        }
        Ok(&num / &den)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        let f = parse_poly("t^2+2*t+1", 3).unwrap();
        assert_eq!(f, Poly::from_coeffs(&[1, 2, 1], 3));
        assert_eq!(parse_poly("1 + 2*t + 1*t^2", 3).unwrap(), f);
        assert_eq!(parse_poly("(t+1)^2", 3).unwrap(), f);
        assert_eq!(parse_poly("-1", 3).unwrap(), Poly::constant(2, 3));
        assert_eq!(parse_poly("2t", 3).unwrap(), Poly::from_coeffs(&[0, 2], 3));
        assert_eq!(parse_poly("7", 5).unwrap(), Poly::constant(2, 5));
    }

    #[test]
    fn fractions() {
        let a = parse_ratfunc("t+1 / t^2+1", 3).unwrap();
        assert_eq!(a.num(), &Poly::from_coeffs(&[1, 1], 3));
        assert_eq!(a.den(), &Poly::from_coeffs(&[1, 0, 1], 3));
        let b = parse_ratfunc("(t-1)/(t-2)^2", 3).unwrap();
        assert_eq!(parse_ratfunc(&b.to_string(), 3).unwrap(), b);
        assert_eq!(parse_ratfunc("t^-1", 3).unwrap(), RatFunc::t(3).inv());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["t^2+2*t+1", "2*t^3+t / t^2+1", "2", "0"] {
            let a = parse_ratfunc(s, 3).unwrap();
            assert_eq!(parse_ratfunc(&a.to_string(), 3).unwrap(), a);
        }
    }

    #[test]
    fn errors() {
        assert!(parse_ratfunc("", 3).is_err());
        assert!(parse_ratfunc("t+", 3).is_err());
        assert!(parse_ratfunc("1/0", 3).is_err());
        assert!(parse_ratfunc("x", 3).is_err());
        assert!(parse_ratfunc("1/t/t", 3).is_err());
        assert!(parse_place("t^2-1", 3).is_err());
        assert_eq!(parse_place("inf", 3).unwrap(), Place::Infinity);
        assert_eq!(parse_place("t^2+1", 3).unwrap(), Place::Finite(Poly::from_coeffs(&[1, 0, 1], 3)));
    }
}
