use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::factor::factor;
use super::poly::{inv_mod, legendre, mul_mod, Poly};

/// An element of F_p(t) as a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(p: u32) -> Self {
        RatFunc { num: Poly::zero(p), den: Poly::one(p) }
    }

    pub fn one(p: u32) -> Self {
        RatFunc { num: Poly::one(p), den: Poly::one(p) }
    }

    pub fn t(p: u32) -> Self {
        RatFunc::from_poly(Poly::t(p))
    }

    pub fn constant(c: i64, p: u32) -> Self {
        RatFunc::from_poly(Poly::constant(c, p))
    }

    pub fn from_poly(num: Poly) -> Self {
        let p = num.prime();
        RatFunc { num, den: Poly::one(p) }
    }

    /// `num / den`, normalized. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let p = num.prime();
        if num.is_zero() {
            return RatFunc::zero(p);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        if !d.is_monic() {
            let c = inv_mod(d.lead(), p);
            n = n.scale(c);
            d = d.scale(c);
        }
        RatFunc { num: n, den: d }
    }

    pub fn prime(&self) -> u32 {
        self.num.prime()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The value as an element of F_p, if constant.
    pub fn as_constant(&self) -> Option<u32> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn zero_like(&self) -> Self {
        RatFunc::zero(self.prime())
    }

    pub fn one_like(&self) -> Self {
        RatFunc::one(self.prime())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero in F_p(t)");
        let p = self.prime();
        let c = inv_mod(self.num.lead(), p);
        RatFunc { num: self.den.scale(c), den: self.num.scale(c) }
    }

    pub fn scale(&self, c: u32) -> RatFunc {
        if c.is_multiple_of(self.prime()) {
            return self.zero_like();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let e = e.unsigned_abs();
        RatFunc { num: base.num.pow(e), den: base.den.pow(e) }
    }

    pub fn square(&self) -> RatFunc {
        self * self
    }

    /// Writes `self = sum_{r<q} t^r * c_r^q` and returns the `c_r`, for `q` a power of p.
    ///
    /// Uses that Frobenius fixes F_p, so `P(t)^q = P(t^q)` for polynomials.
    pub fn frobenius_components(&self, q: usize) -> Vec<RatFunc> {
        if q == 1 {
            return vec![self.clone()];
        }
        let scaled = &self.num * &self.den.pow(q as u64 - 1);
        scaled
            .decimate(q)
            .into_iter()
            .map(|part| RatFunc::new(part, self.den.clone()))
            .collect()
    }

    /// Square root in F_p(t), if one exists.
    pub fn sqrt(&self) -> Option<RatFunc> {
        let p = self.prime();
        if self.is_zero() {
            return Some(self.clone());
        }
        // sqrt(n/d) = sqrt(n d) / d
        let nd = &self.num * &self.den;
        let f = factor(&nd).ok()?;
        let c = sqrt_mod(f.lead, p)?;
        let mut root = Poly::constant(c as i64, p);
        for (irr, m) in &f.factors {
            if m % 2 != 0 {
                return None;
            }
            root = &root * &irr.pow((*m / 2) as u64);
        }
        Some(RatFunc::new(root, self.den.clone()))
    }
}

/// Square root in F_p by exhaustive search.
pub fn sqrt_mod(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    (1..p).find(|&x| mul_mod(x, x, p) == a)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            // already coprime to the product of coprime denominators
            return RatFunc::new(num, &self.den * &rhs.den);
        }
        let ad = self.den.exact_div(&g);
        let bd = rhs.den.exact_div(&g);
        let num = &(&self.num * &bd) + &(&rhs.num * &ad);
        RatFunc::new(num, &(&ad * &bd) * &g)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (an, bd) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.exact_div(&g1), rhs.den.exact_div(&g1))
        };
        let (bn, ad) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.exact_div(&g2), self.den.exact_div(&g2))
        };
        RatFunc { num: &an * &bn, den: &ad * &bd }
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_coeffs(n, 3), Poly::from_coeffs(d, 3))
    }

    #[test]
    fn normalization() {
        // (2t+2)/(2t^2+2) over F_3 -> (t+1)/(t^2+1)
        let a = rf(&[2, 2], &[2, 0, 2]);
        assert_eq!(a.num(), &Poly::from_coeffs(&[1, 1], 3));
        assert!(a.den().is_monic());
        // (t^2-1)/(t-1) = t+1
        let b = rf(&[-1, 0, 1], &[-1, 1]);
        assert!(b.is_poly());
        assert_eq!(b.num(), &Poly::from_coeffs(&[1, 1], 3));
    }

    #[test]
    fn field_identities() {
        let a = rf(&[1, 1], &[0, 1]);
        let b = rf(&[2], &[1, 0, 1]);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&(&a * &b) / &b, a);
        assert!((&a * &a.inv()).is_one());
        assert_eq!(a.pow(-2), (&a * &a).inv());
    }

    #[test]
    fn frobenius_components_reassemble() {
        let a = rf(&[1, 2, 0, 1], &[2, 1]);
        for q in [1usize, 3, 9] {
            let parts = a.frobenius_components(q);
            let mut back = RatFunc::zero(3);
            for (r, c) in parts.iter().enumerate() {
                let qth = RatFunc::new(c.num().inflate(q), c.den().inflate(q));
                back = &back + &(&qth * &RatFunc::t(3).pow(r as i64));
            }
            assert_eq!(back, a, "q = {q}");
        }
    }

    #[test]
    fn square_roots() {
        let a = rf(&[1, 1], &[2, 0, 1]);
        assert_eq!(a.square().sqrt().map(|r| r.square()), Some(a.square()));
        assert!(RatFunc::t(3).sqrt().is_none());
        assert!(RatFunc::constant(-1, 3).sqrt().is_none());
        assert_eq!(RatFunc::constant(-1, 5).sqrt().map(|r| r.square()), Some(RatFunc::constant(-1, 5)));
    }
}
