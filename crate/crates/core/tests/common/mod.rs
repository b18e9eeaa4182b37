#![allow(dead_code)]

use gform::funcfield::{Place, Poly, RatFunc};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn poly(coeffs: &[u32], p: u32) -> Poly {
    Poly::from_raw(coeffs.to_vec(), p)
}

/// Nonzero polynomial of degree at most `d`.
pub fn random_poly(rng: &mut ChaCha8Rng, d: usize, p: u32) -> Poly {
    loop {
        let deg = rng.gen_range(0..=d);
        let c: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
        let f = poly(&c, p);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_ratfunc(rng: &mut ChaCha8Rng, d: usize, p: u32) -> RatFunc {
    RatFunc::new(random_poly(rng, d, p), random_poly(rng, d, p))
}

/// `a` as `(f, pi)` at a finite place: the place at infinity becomes `s = 0` under `t = 1/s`.
fn at_finite(a: &RatFunc, v: &Place) -> (Poly, Poly, Poly) {
    let p = a.prime();
    match v {
        Place::Finite(pi) => (a.num().clone(), a.den().clone(), pi.clone()),
        Place::Infinity => {
            // a(1/s) = s^(deg d - deg n) rev(n) / rev(d)
            let rev = |f: &Poly| {
                let mut c = f.coeffs().to_vec();
                c.reverse();
                poly(&c, p)
            };
            let (n, d) = (a.num(), a.den());
            let shift = d.deg_i64() - n.deg_i64();
            let s = poly(&[0, 1], p);
            let (mut num, mut den) = (rev(n), rev(d));
            if shift >= 0 {
                num = &num * &s.pow(shift as u64);
            } else {
                den = &den * &s.pow((-shift) as u64);
            }
            (num, den, s)
        }
    }
}

fn strip(f: &Poly, pi: &Poly) -> (i64, Poly) {
    let mut v = 0;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.div_rem(pi);
        if !r.is_zero() {
            return (v, cur);
        }
        v += 1;
        cur = q;
    }
}

/// `a = pi^v * num / den` with `num`, `den` prime to `pi`.
pub struct LocalUnit {
    pub valuation: i64,
    pub num: Poly,
    pub den: Poly,
    pub pi: Poly,
}

pub fn local_unit(a: &RatFunc, v: &Place) -> LocalUnit {
    let (n, d, pi) = at_finite(a, v);
    let (vn, n) = strip(&n, &pi);
    let (vd, d) = strip(&d, &pi);
    LocalUnit { valuation: vn - vd, num: n, den: d, pi }
}

impl LocalUnit {
    /// The unit modulo `m`, a power of `pi`.
    pub fn modulo(&self, m: &Poly) -> Poly {
        (&self.num * &self.den.inv_mod(m).expect("unit")).rem(m)
    }
}

fn field_elements(m: &Poly) -> Vec<Poly> {
    let p = m.prime();
    let d = m.degree().expect("nonzero");
    let count = (p as u64).pow(d as u32);
    (0..count)
        .map(|mut idx| {
            let c: Vec<u32> = (0..d)
                .map(|_| {
                    let x = (idx % p as u64) as u32;
                    idx /= p as u64;
                    x
                })
                .collect();
            poly(&c, p)
        })
        .collect()
}

fn eval_form(c: &[Poly], x: &[Poly], m: &Poly) -> Poly {
    let mut acc = Poly::zero(m.prime());
    for (ci, xi) in c.iter().zip(x) {
        acc = &acc + &(&(ci * xi) * xi);
    }
    acc.rem(m)
}

/// A nonzero zero of `sum c_i x_i^2` over `F_p[t]/(pi)`, by exhaustive search.
fn residue_zero(c: &[Poly], pi: &Poly) -> Option<Vec<Poly>> {
    if c.len() < 2 {
        return None;
    }
    let elems = field_elements(pi);
    let n = c.len();
    let total = elems.len().pow(n as u32);
    for idx in 1..total {
        let mut k = idx;
        let x: Vec<Poly> = (0..n)
            .map(|_| {
                let e = elems[k % elems.len()].clone();
                k /= elems.len();
                e
            })
            .collect();
        if eval_form(c, &x, pi).is_zero() {
            return Some(x);
        }
    }
    None
}

/// Newton steps on `sum c_i x_i^2` from a residue zero, up to precision `pi^(2^steps)`.
/// Returns the final precision exponent reached with `q(x) = 0 mod pi^e`.
fn hensel_lift(units: &[LocalUnit], x0: Vec<Poly>, steps: u32) -> u64 {
    let pi = &units[0].pi;
    let p = pi.prime();
    let i = (0..x0.len()).find(|&i| !x0[i].rem(pi).is_zero()).expect("nonzero residue zero");
    let mut x = x0;
    let mut e = 1u64;
    for _ in 0..steps {
        e *= 2;
        let m = pi.pow(e);
        let c: Vec<Poly> = units.iter().map(|u| u.modulo(&m)).collect();
        let q = eval_form(&c, &x, &m);
        // derivative 2 c_i x_i is a unit since x_i is
        let deriv = (&(&c[i] * &x[i]) * &Poly::constant(2, p)).rem(&m);
        let step = (&q * &deriv.inv_mod(&m).expect("unit derivative")).rem(&m);
        x[i] = (&x[i] - &step).rem(&m);
        let c: Vec<Poly> = units.iter().map(|u| u.modulo(&m)).collect();
        assert!(eval_form(&c, &x, &m).is_zero(), "Newton step failed at precision {e}");
    }
    e
}

/// Isotropy of the diagonal form with the given entries over the completion at `v`:
/// scale entries to unit or uniformizer times unit, split into the two residue forms,
/// search each over the residue field and lift a zero with Newton's method.
pub fn isotropic_by_lifting(entries: &[RatFunc], v: &Place) -> bool {
    let units: Vec<LocalUnit> = entries.iter().map(|a| local_unit(a, v)).collect();
    let pi = units[0].pi.clone();
    for parity in [0, 1] {
        let part: Vec<&LocalUnit> = units.iter().filter(|u| u.valuation.rem_euclid(2) == parity).collect();
        let residues: Vec<Poly> = part.iter().map(|u| u.modulo(&pi)).collect();
        if let Some(x0) = residue_zero(&residues, &pi) {
            let owned: Vec<LocalUnit> =
                part.iter().map(|u| LocalUnit { valuation: u.valuation, num: u.num.clone(), den: u.den.clone(), pi: pi.clone() }).collect();
            assert!(hensel_lift(&owned, x0, 3) >= 8);
            return true;
        }
    }
    false
}
