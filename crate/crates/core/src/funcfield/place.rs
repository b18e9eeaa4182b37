use std::collections::BTreeSet;
use std::fmt;

use super::factor::{factor, is_irreducible};
use super::poly::{inv_mod, legendre, mul_mod, Poly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// A closed point of the projective line over F_p.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// Monic irreducible polynomial.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn finite(pi: Poly) -> Result<Place> {
        if !pi.is_monic() || !is_irreducible(&pi) {
            return Err(Error::input(format!("{pi} is not monic irreducible")));
        }
        Ok(Place::Finite(pi))
    }

    /// Degree of the residue field over F_p.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    /// Whether -1 is a square in the residue field.
    pub fn minus_one_is_square(&self, p: u32) -> bool {
        self.degree().is_multiple_of(2) || legendre(p - 1, p) == 1
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "{pi}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

/// Order of vanishing of `a` at `v`; `None` stands for +infinity (a = 0).
pub fn valuation(a: &RatFunc, v: &Place) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    Some(match v {
        Place::Finite(pi) => a.num().split_off(pi).0 - a.den().split_off(pi).0,
        Place::Infinity => a.den().deg_i64() - a.num().deg_i64(),
    })
}

/// Valuation together with the residue of the unit part `a * pi^(-val)`, as a
/// polynomial reduced mod pi (a constant at infinity, with uniformizer 1/t).
pub fn unit_residue(a: &RatFunc, v: &Place) -> Result<(i64, Poly)> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("unit_residue"));
    }
    let p = a.prime();
    match v {
        Place::Finite(pi) => {
            let (vn, n) = a.num().split_off(pi);
            let (vd, d) = a.den().split_off(pi);
            let dinv = d.inv_mod(pi).expect("cofactor is a unit mod pi");
            Ok((vn - vd, (&n * &dinv).rem(pi)))
        }
        Place::Infinity => {
            let val = a.den().deg_i64() - a.num().deg_i64();
            let c = mul_mod(a.num().lead(), inv_mod(a.den().lead(), p), p);
            Ok((val, Poly::constant(c as i64, p)))
        }
    }
}

/// +1, -1 or 0 according as `u` is a nonzero square, a nonsquare, or zero in the
/// residue field at `v`. At infinity the residue field is F_p and `u` must be constant.
pub fn quadratic_character(u: &Poly, v: &Place) -> Result<i8> {
    let p = u.prime();
    match v {
        Place::Finite(pi) => {
            let r = u.rem(pi);
            if r.is_zero() {
                return Ok(0);
            }
            let e = r.half_norm_power_mod(pi.degree().unwrap_or(0), pi);
            Ok(if e.is_one() { 1 } else { -1 })
        }
        Place::Infinity => {
            if !u.is_constant() {
                return Err(Error::input("residue at inf must be a constant"));
            }
            Ok(legendre(u.coeff(0), p))
        }
    }
}

pub fn is_local_square(a: &RatFunc, v: &Place) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("is_local_square"));
    }
    let (val, u) = unit_residue(a, v)?;
    Ok(val % 2 == 0 && quadratic_character(&u, v)? == 1)
}

/// The tame Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: &RatFunc, b: &RatFunc, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("hilbert_symbol"));
    }
    let (alpha, ua) = unit_residue(a, v)?;
    let (beta, ub) = unit_residue(b, v)?;
    let mut s = 1i8;
    if alpha * beta % 2 != 0 && !v.minus_one_is_square(a.prime()) {
        s = -s;
    }
    if beta % 2 != 0 {
        s *= quadratic_character(&ua, v)?;
    }
    if alpha % 2 != 0 {
        s *= quadratic_character(&ub, v)?;
    }
    Ok(s)
}

/// Finite places where `a` has a zero or pole.
pub fn places_of(a: &RatFunc) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    for f in [a.num(), a.den()] {
        if f.degree().unwrap_or(0) > 0 {
            for (pi, _) in factor(f).expect("nonzero").factors {
                out.insert(Place::Finite(pi));
            }
        }
    }
    out
}

/// Places dividing any of the elements, plus infinity.
pub fn support_of<'a>(elems: impl IntoIterator<Item = &'a RatFunc>) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    for a in elems {
        out.extend(places_of(a));
    }
    out.insert(Place::Infinity);
    out
}

pub fn support(a: &RatFunc, b: &RatFunc) -> Result<BTreeSet<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("support"));
    }
    Ok(support_of([a, b]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Poly {
        Poly::from_coeffs(c, 3)
    }
    fn rf(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(poly(c))
    }
    fn fin(c: &[i64]) -> Place {
        Place::finite(poly(c)).unwrap()
    }

    #[test]
    fn valuations() {
        let t = RatFunc::t(3);
        assert_eq!(valuation(&t, &fin(&[0, 1])), Some(1));
        assert_eq!(valuation(&t, &Place::Infinity), Some(-1));
        let a = RatFunc::new(poly(&[-1, 1]), poly(&[-2, 1]).pow(2));
        assert_eq!(valuation(&a, &fin(&[-2, 1])), Some(-2));
        assert_eq!(valuation(&RatFunc::zero(3), &Place::Infinity), None);
    }

    #[test]
    fn local_squares() {
        let t = RatFunc::t(3);
        assert!(!is_local_square(&t, &fin(&[0, 1])).unwrap());
        assert!(!is_local_square(&rf(&[-1]), &fin(&[0, 1])).unwrap());
        assert!(is_local_square(&rf(&[-1]), &fin(&[1, 0, 1])).unwrap());
        assert!(is_local_square(&RatFunc::zero(3), &Place::Infinity).is_err());
    }

    #[test]
    fn characters() {
        assert_eq!(quadratic_character(&poly(&[1]), &fin(&[0, 1])).unwrap(), 1);
        assert_eq!(quadratic_character(&poly(&[-1]), &fin(&[0, 1])).unwrap(), -1);
        assert_eq!(quadratic_character(&poly(&[-1]), &fin(&[1, 0, 1])).unwrap(), 1);
        assert_eq!(quadratic_character(&poly(&[0, 0, 1]), &fin(&[0, 1])).unwrap(), 0);
    }

    #[test]
    fn symbols() {
        let m1 = rf(&[-1]);
        let t = RatFunc::t(3);
        assert_eq!(hilbert_symbol(&m1, &t, &fin(&[0, 1])).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &t, &Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rf(&[1]), &t, &Place::Infinity).unwrap(), 1);
        assert!(hilbert_symbol(&RatFunc::zero(3), &t, &Place::Infinity).is_err());
    }

    #[test]
    fn supports() {
        let m1 = rf(&[-1]);
        let s = support(&m1, &RatFunc::t(3)).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![fin(&[0, 1]), Place::Infinity]);
        let b = rf(&[2, -3, 1]);
        let s = support(&m1, &b).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![fin(&[-2, 1]), fin(&[-1, 1]), Place::Infinity]);
        let one = rf(&[1]);
        assert_eq!(support(&one, &one).unwrap().len(), 1);
    }

    #[test]
    fn places_must_be_irreducible() {
        assert!(Place::finite(poly(&[2, -3, 1])).is_err());
        assert!(Place::finite(poly(&[0, 2])).is_err());
    }
}
