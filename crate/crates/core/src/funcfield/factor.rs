//! Factorization over F_p: squarefree split, distinct-degree, then equal-degree splitting.

use super::poly::{inv_mod, Poly};
use crate::error::{Error, Result};

/// `lead * prod f_i^{m_i}` with monic irreducible `f_i`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lead: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, p: u32) -> Poly {
        let mut acc = Poly::constant(self.lead as i64, p);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u64);
        }
        acc
    }
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::FactorZero);
    }
    let p = f.prime();
    let lead = f.lead();
    let monic = f.scale(inv_mod(lead, p));
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree(&monic) {
        for (block, d) in distinct_degree(&sqf) {
            for irr in equal_degree(&block, d) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { lead, factors })
}

pub fn is_irreducible(f: &Poly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(_) => factor(f).map(|fa| fa.factors.len() == 1 && fa.factors[0].1 == 1).unwrap_or(false),
    }
}

/// Monic squarefree factors with multiplicities (Yun, with p-th roots for char p).
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let p = f.prime();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        // what remains is a p-th power
        let root = Poly::from_raw(c.coeffs().iter().step_by(p as usize).copied().collect(), p);
        for (g, m) in squarefree(&root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree `f` into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.prime();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let t = Poly::t(p);
    let mut h = t.rem(&rest);
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p as u64, &rest);
        let g = (&h - &t).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting with a deterministic sequence of trial polynomials.
fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.clone()];
    }
    let p = f.prime();
    let mut seed = p as u64;
    loop {
        let a = trial_poly(seed, n, p);
        seed += 1;
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = &a.half_norm_power_mod(d, f) - &Poly::one(p);
        let g = b.gcd(f);
        if let Some(gd) = g.degree() {
            if gd > 0 && gd < n {
                let mut out = equal_degree(&g, d);
                out.extend(equal_degree(&f.exact_div(&g), d));
                return out;
            }
        }
    }
}

/// The polynomial whose base-p digits (low first) are those of `idx`, degree < n.
fn trial_poly(mut idx: u64, n: usize, p: u32) -> Poly {
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        coeffs.push((idx % p as u64) as u32);
        idx /= p as u64;
    }
    Poly::from_raw(coeffs, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &Poly) -> bool {
        let n = f.degree().unwrap();
        (1..=n / 2).all(|d| Poly::monics_of_degree(d, f.prime()).all(|g| !f.rem(&g).is_zero()))
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(factor(&Poly::zero(3)), Err(Error::FactorZero));
    }

    #[test]
    fn small_examples() {
        let fa = factor(&Poly::t(3)).unwrap();
        assert_eq!(fa.factors, vec![(Poly::t(3), 1)]);
        let f = Poly::from_coeffs(&[1, 0, 1], 3);
        assert_eq!(factor(&f).unwrap().factors, vec![(f.clone(), 1)]);
        let g = Poly::from_coeffs(&[2, -3, 1], 3);
        let fa = factor(&g).unwrap();
        assert_eq!(fa.factors, vec![(Poly::from_coeffs(&[-2, 1], 3), 1), (Poly::from_coeffs(&[-1, 1], 3), 1)]);
    }

    #[test]
    fn pth_powers_and_repeated_factors() {
        // (t+1)^3 (t^2+1)^2 * 2 over F_3
        let a = Poly::from_coeffs(&[1, 1], 3);
        let b = Poly::from_coeffs(&[1, 0, 1], 3);
        let f = (&a.pow(3) * &b.pow(2)).scale(2);
        let fa = factor(&f).unwrap();
        assert_eq!(fa.lead, 2);
        assert_eq!(fa.factors, vec![(a, 3), (b, 2)]);
        assert_eq!(fa.expand(3), f);
    }

    #[test]
    fn all_small_polys_factor_correctly() {
        for p in [3u32, 5] {
            for d in 1..=5 {
                for f in Poly::monics_of_degree(d, p).take(400) {
                    let fa = factor(&f).unwrap();
                    assert_eq!(fa.expand(p), f);
                    for (g, _) in &fa.factors {
                        assert!(g.is_monic() && brute_irreducible(g), "{g} from {f}");
                    }
                    assert!(fa.factors.windows(2).all(|w| w[0].0 < w[1].0));
                }
            }
        }
    }
}
