use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Returns `true` if `p` is an odd prime.
pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Validates the global characteristic.
pub fn check_prime(p: u32) -> Result<u32> {
    if is_odd_prime(p) {
        Ok(p)
    } else {
        Err(Error::Input(format!("p = {p} is not an odd prime")))
    }
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u32 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
    pow_mod(a, (p - 2) as u64, p)
}

/// Reduces a signed integer into `[0, p)`.
pub fn reduce_i64(c: i64, p: u32) -> u32 {
    c.rem_euclid(p as i64) as u32
}

/// Legendre symbol of `a` in F_p: 1, -1 or 0.
pub fn legendre(a: u32, p: u32) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// The smallest positive quadratic nonresidue mod `p`.
pub fn smallest_nonsquare(p: u32) -> u32 {
    (2..p).find(|&c| legendre(c, p) == -1).expect("odd prime has nonsquares")
}

/// A polynomial over F_p, coefficients lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Poly::constant(1, p)
    }

    /// The indeterminate `t`.
    pub fn t(p: u32) -> Self {
        Poly { p, coeffs: vec![0, 1] }
    }

    pub fn constant(c: i64, p: u32) -> Self {
        Poly::from_raw(vec![reduce_i64(c, p)], p)
    }

    pub fn monomial(c: i64, degree: usize, p: u32) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = reduce_i64(c, p);
        Poly::from_raw(coeffs, p)
    }

    /// Builds a polynomial from signed coefficients, lowest degree first.
    pub fn from_coeffs(coeffs: &[i64], p: u32) -> Self {
        Poly::from_raw(coeffs.iter().map(|&c| reduce_i64(c, p)).collect(), p)
    }

    /// Builds from residues already in `[0, p)`, trimming trailing zeros.
    pub fn from_raw(mut coeffs: Vec<u32>, p: u32) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < p));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.p;
        if c == 0 {
            return Poly::zero(self.p);
        }
        Poly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { p: self.p, coeffs }
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, (i as u64 % p as u64) as u32, p))
            .collect();
        Poly::from_raw(coeffs, p)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let inv_lead = inv_mod(d.lead(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u32; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = mul_mod(r[i + dd], inv_lead, p);
            q[i] = c;
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = sub_mod(r[i + j], mul_mod(c, dc, p), p);
                }
            }
        }
        r.truncate(dd);
        (Poly::from_raw(q, p), Poly::from_raw(r, p))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact division; debug-asserts a zero remainder.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(p), Poly::zero(p));
        let (mut t0, mut t1) = (Poly::zero(p), Poly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = inv_mod(r0.lead(), p);
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        acc
    }

    /// `self^((p^d - 1) / 2) mod m`, the exponent handled through Frobenius powers
    /// so that it never has to be materialized.
    pub fn half_norm_power_mod(&self, d: usize, m: &Poly) -> Poly {
        let p = self.p as u64;
        let mut frob = self.rem(m);
        let mut prod = Poly::one(self.p).rem(m);
        for i in 0..d {
            if i > 0 {
                frob = frob.pow_mod(p, m);
            }
            prod = (&prod * &frob).rem(m);
        }
        prod.pow_mod((p - 1) / 2, m)
    }

    /// `t -> t^k` substitution.
    pub fn inflate(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        Poly { p: self.p, coeffs }
    }

    /// Splits `self = sum_{r<k} t^r * P_r(t^k)` and returns the `P_r`.
    pub fn decimate(&self, k: usize) -> Vec<Poly> {
        (0..k)
            .map(|r| {
                let coeffs = self.coeffs.iter().skip(r).step_by(k).copied().collect();
                Poly::from_raw(coeffs, self.p)
            })
            .collect()
    }

    /// Order of vanishing at the irreducible `pi`, and the cofactor.
    pub fn split_off(&self, pi: &Poly) -> (i64, Poly) {
        debug_assert!(!self.is_zero());
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(pi);
            if !r.is_zero() {
                return (v, cur);
            }
            v += 1;
            cur = q;
        }
    }

    /// Enumerates the `p^d` monic polynomials of degree `d`, in increasing order of
    /// their lower coefficients read as a base-p number.
    pub fn monics_of_degree(d: usize, p: u32) -> impl Iterator<Item = Poly> {
        let count = (p as u64).pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push((idx % p as u64) as u32);
                idx /= p as u64;
            }
            coeffs.push(1);
            Poly { p, coeffs }
        })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then the coefficient sequence from the constant term up.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let p = self.p;
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = add_mod(*c, s, p);
        }
        Poly::from_raw(coeffs, p)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| sub_mod(self.coeff(i), rhs.coeff(i), p)).collect();
        Poly::from_raw(coeffs, p)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.p;
        Poly {
            p,
            coeffs: self.coeffs.iter().map(|&c| sub_mod(0, c, p)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let p = self.p;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(p);
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(self.coeffs[0]);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(rhs.coeffs[0]);
        }
        // accumulate in u64 and reduce lazily
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut acc = vec![0u64; n];
        let pp = p as u64;
        let limit = u64::MAX - pp * pp;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot += a as u64 * b as u64;
                if *slot > limit {
                    *slot %= pp;
                }
            }
        }
        Poly::from_raw(acc.into_iter().map(|c| (c % pp) as u32).collect(), p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
