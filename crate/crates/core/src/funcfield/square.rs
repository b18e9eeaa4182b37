use std::fmt;

use super::factor::factor;
use super::place::{quadratic_character, unit_residue, Place};
use super::poly::{legendre, smallest_nonsquare, Poly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Canonical representative `c * m` of a class in k*/k*^2: `c` is 1 or the smallest
/// nonsquare of F_p, `m` is monic squarefree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub nonsquare_constant: bool,
    pub squarefree: Poly,
}

impl SquareClass {
    pub fn of(a: &RatFunc) -> Result<SquareClass> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("square class"));
        }
        let p = a.prime();
        // n/d and n*d differ by the square d^2
        let fa = factor(&(a.num() * a.den()))?;
        let mut m = Poly::one(p);
        for (g, mult) in &fa.factors {
            if mult % 2 == 1 {
                m = &m * g;
            }
        }
        Ok(SquareClass { nonsquare_constant: legendre(fa.lead, p) == -1, squarefree: m })
    }

    pub fn trivial(p: u32) -> SquareClass {
        SquareClass { nonsquare_constant: false, squarefree: Poly::one(p) }
    }

    pub fn is_trivial(&self) -> bool {
        !self.nonsquare_constant && self.squarefree.is_one()
    }

    pub fn representative(&self) -> RatFunc {
        let p = self.squarefree.prime();
        let c = if self.nonsquare_constant { smallest_nonsquare(p) } else { 1 };
        RatFunc::from_poly(self.squarefree.scale(c))
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let g = self.squarefree.gcd(&other.squarefree);
        let prod = &self.squarefree * &other.squarefree;
        let m = prod.exact_div(&(&g * &g));
        SquareClass { nonsquare_constant: self.nonsquare_constant ^ other.nonsquare_constant, squarefree: m }
    }

    pub fn local(&self, v: &Place) -> LocalSquareClass {
        LocalSquareClass::of(&self.representative(), v).expect("representative is nonzero")
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SquareClass({self})")
    }
}

/// The class of an element in k_v*/k_v*^2, which has order 4 at every place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalSquareClass {
    pub odd_valuation: bool,
    pub unit_nonsquare: bool,
}

impl LocalSquareClass {
    pub fn of(a: &RatFunc, v: &Place) -> Result<LocalSquareClass> {
        let (val, u) = unit_residue(a, v)?;
        Ok(LocalSquareClass { odd_valuation: val % 2 != 0, unit_nonsquare: quadratic_character(&u, v)? == -1 })
    }

    pub fn is_trivial(&self) -> bool {
        !self.odd_valuation && !self.unit_nonsquare
    }
}

impl fmt::Display for LocalSquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.unit_nonsquare, self.odd_valuation) {
            (false, false) => "1",
            (true, false) => "u",
            (false, true) => "pi",
            (true, true) => "u*pi",
        };
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_coeffs(c, 3))
    }

    #[test]
    fn examples() {
        let c = SquareClass::of(&rf(&[-1])).unwrap();
        assert!(c.nonsquare_constant && c.squarefree.is_one());
        assert!(SquareClass::of(&rf(&[0, 0, 1])).unwrap().is_trivial());
        let c = SquareClass::of(&rf(&[0, 1])).unwrap();
        assert_eq!(c.squarefree, Poly::t(3));
        assert!(!c.nonsquare_constant);
    }

    #[test]
    fn idempotent_and_multiplicative() {
        let a = RatFunc::new(Poly::from_coeffs(&[2, 1, 1], 3), Poly::from_coeffs(&[0, 1], 3));
        let b = RatFunc::new(Poly::from_coeffs(&[1, 2], 3), Poly::from_coeffs(&[1, 0, 1], 3));
        let ca = SquareClass::of(&a).unwrap();
        assert_eq!(SquareClass::of(&ca.representative()).unwrap(), ca);
        let cb = SquareClass::of(&b).unwrap();
        assert_eq!(SquareClass::of(&(&a * &b)).unwrap(), ca.mul(&cb));
    }
}
