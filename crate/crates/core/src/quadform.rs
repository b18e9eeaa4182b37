//! Nondegenerate quadratic forms over F_p(t) and the local-global equivalence test.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::funcfield::{support_of, LocalSquareClass, Place, RatFunc, SquareClass};
use crate::linalg::Matrix;

/// A symmetric Gram matrix over F_p(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    gram: Matrix,
}

/// `P^T G P = diag(entries)`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub entries: Vec<RatFunc>,
    pub transform: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    pub rank: usize,
    pub disc: SquareClass,
    /// Places with Hasse invariant -1; the invariant is +1 everywhere else.
    pub hasse_minus: BTreeSet<Place>,
    pub checked: BTreeSet<Place>,
}

impl LocalInvariants {
    pub fn to_json(&self) -> Value {
        let hasse: Vec<Value> = self
            .checked
            .iter()
            .map(|v| json!([v.to_string(), if self.hasse_minus.contains(v) { -1 } else { 1 }]))
            .collect();
        json!({ "rank": self.rank, "disc": self.disc.to_string(), "hasse": hasse })
    }
}

impl QuadForm {
    pub fn new(gram: Matrix) -> Result<QuadForm> {
        if !gram.is_square() {
            return Err(Error::input("Gram matrix is not square"));
        }
        if !gram.is_symmetric() {
            return Err(Error::input("Gram matrix is not symmetric"));
        }
        Ok(QuadForm { gram })
    }

    pub fn diagonal(p: u32, entries: &[RatFunc]) -> QuadForm {
        QuadForm { gram: Matrix::diagonal(p, entries) }
    }

    /// The diagonal form with entries given in the textual format.
    pub fn from_diagonal_strs(p: u32, entries: &[&str]) -> Result<QuadForm> {
        let e: Result<Vec<RatFunc>> = entries.iter().map(|s| crate::funcfield::parse_ratfunc(s, p)).collect();
        Ok(QuadForm::diagonal(p, &e?))
    }

    /// The hyperbolic form `<1,-1,...,1,-1>` of even rank `n`.
    pub fn hyperbolic(p: u32, n: usize) -> QuadForm {
        let e: Vec<RatFunc> = (0..n).map(|i| RatFunc::constant(if i % 2 == 0 { 1 } else { -1 }, p)).collect();
        QuadForm::diagonal(p, &e)
    }

    /// `{"p": 3, "gram": [[...]]}`, or a bare array of rows read over `default_p`.
    pub fn from_json(v: &Value, default_p: u32) -> Result<QuadForm> {
        let (p, rows) = match v {
            Value::Object(o) => {
                let p = match o.get("p") {
                    None => default_p,
                    Some(x) => x.as_u64().ok_or_else(|| Error::input("form: \"p\" must be an integer"))? as u32,
                };
                (p, o.get("gram").ok_or_else(|| Error::input("form: missing field \"gram\""))?)
            }
            _ => (default_p, v),
        };
        crate::funcfield::check_prime(p)?;
        let gram = crate::grpalg::parse_matrix(rows, p).map_err(|e| Error::input(format!("form: {e}")))?;
        QuadForm::new(gram)
    }

    pub fn to_json(&self) -> Value {
        json!({ "p": self.prime(), "gram": self.gram.to_strings() })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn prime(&self) -> u32 {
        self.gram.prime()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn orthogonal_sum(&self, other: &QuadForm) -> QuadForm {
        let (n, m) = (self.rank(), other.rank());
        let p = self.prime();
        let gram = Matrix::from_fn(p, n + m, n + m, |i, j| match (i < n, j < n) {
            (true, true) => self.gram[(i, j)].clone(),
            (false, false) => other.gram[(i - n, j - n)].clone(),
            _ => RatFunc::zero(p),
        });
        QuadForm { gram }
    }

    /// The form with Gram `P^T G P`.
    pub fn transform(&self, pm: &Matrix) -> QuadForm {
        QuadForm { gram: &(&pm.transpose() * &self.gram) * pm }
    }

    /// Symmetric elimination. Diagonal pivots are preferred (lightest first); when the
    /// remaining diagonal vanishes, `e_i <- e_i + e_j` creates the pivot `2 G_ij`.
    pub fn diagonalize(&self) -> Result<Diagonalization> {
        let n = self.rank();
        let p = self.prime();
        let mut g = self.gram.clone();
        let mut pm = Matrix::identity(p, n);
        for k in 0..n {
            let diag = (k..n)
                .filter(|&i| !g[(i, i)].is_zero())
                .min_by_key(|&i| g[(i, i)].num().coeffs().len() + g[(i, i)].den().coeffs().len());
            let piv = match diag {
                Some(i) => i,
                None => {
                    let Some((i, j)) = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !g[(i, j)].is_zero())
                    else {
                        return Err(Error::Degenerate);
                    };
                    add_basis_vector(&mut g, &mut pm, i, j);
                    i
                }
            };
            swap_basis_vectors(&mut g, &mut pm, k, piv);
            let d = g[(k, k)].clone();
            let dinv = d.inv();
            for i in k + 1..n {
                if g[(k, i)].is_zero() {
                    continue;
                }
                let f = &g[(k, i)] * &dinv;
                for j in i..n {
                    if g[(k, j)].is_zero() {
                        continue;
                    }
                    let x = &g[(i, j)] - &(&f * &g[(k, j)]);
                    g[(i, j)] = x.clone();
                    g[(j, i)] = x;
                }
                for r in 0..n {
                    if pm[(r, k)].is_zero() {
                        continue;
                    }
                    let x = &pm[(r, i)] - &(&f * &pm[(r, k)]);
                    pm[(r, i)] = x;
                }
            }
            for i in k + 1..n {
                g[(k, i)] = RatFunc::zero(p);
                g[(i, k)] = RatFunc::zero(p);
            }
        }
        let entries: Vec<RatFunc> = (0..n).map(|i| g[(i, i)].clone()).collect();
        Ok(Diagonalization { entries, transform: pm })
    }

    fn entries(&self) -> Result<Vec<RatFunc>> {
        let n = self.rank();
        if (0..n).all(|i| (0..n).all(|j| i == j || self.gram[(i, j)].is_zero())) {
            if (0..n).any(|i| self.gram[(i, i)].is_zero()) {
                return Err(Error::Degenerate);
            }
            return Ok((0..n).map(|i| self.gram[(i, i)].clone()).collect());
        }
        Ok(self.diagonalize()?.entries)
    }

    pub fn disc(&self) -> Result<SquareClass> {
        disc_of(&self.entries()?)
    }

    pub fn hasse_invariant(&self, v: &Place) -> Result<i8> {
        Ok(DiagonalData::new(self.entries()?)?.hasse(v))
    }

    pub fn bad_places(&self) -> Result<BTreeSet<Place>> {
        Ok(support_of(&self.entries()?))
    }

    pub fn invariants(&self) -> Result<LocalInvariants> {
        DiagonalData::new(self.entries()?)?.invariants()
    }

    /// Precomputed diagonal data, to answer many local questions without re-diagonalizing.
    pub fn local_data(&self) -> Result<DiagonalData> {
        DiagonalData::new(self.entries()?)
    }

    pub fn is_isotropic_at(&self, v: &Place) -> Result<bool> {
        Ok(self.local_data()?.is_isotropic_at(v))
    }

    pub fn is_isotropic(&self) -> Result<bool> {
        self.local_data()?.is_isotropic()
    }

    pub fn is_hyperbolic_at(&self, v: &Place) -> Result<bool> {
        self.local_data()?.is_hyperbolic_at(v)
    }

    pub fn is_hyperbolic(&self) -> Result<bool> {
        self.local_data()?.is_hyperbolic()
    }
}

fn add_basis_vector(g: &mut Matrix, pm: &mut Matrix, i: usize, j: usize) {
    let n = g.rows();
    for c in 0..n {
        let x = &g[(i, c)] + &g[(j, c)];
        g[(i, c)] = x;
    }
    for r in 0..n {
        let x = &g[(r, i)] + &g[(r, j)];
        g[(r, i)] = x;
        let y = &pm[(r, i)] + &pm[(r, j)];
        pm[(r, i)] = y;
    }
}

fn swap_basis_vectors(g: &mut Matrix, pm: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = g.rows();
    g.swap_rows(a, b);
    for r in 0..n {
        let x = g[(r, a)].clone();
        g[(r, a)] = g[(r, b)].clone();
        g[(r, b)] = x;
        let y = pm[(r, a)].clone();
        pm[(r, a)] = pm[(r, b)].clone();
        pm[(r, b)] = y;
    }
}

fn disc_of(entries: &[RatFunc]) -> Result<SquareClass> {
    let p = entries.first().map_or(3, |e| e.prime());
    let mut c = SquareClass::trivial(p);
    for e in entries {
        c = c.mul(&SquareClass::of(e)?);
    }
    Ok(c)
}

/// `(a, b)_v` from the local square classes of `a` and `b`.
pub fn local_symbol(a: LocalSquareClass, b: LocalSquareClass, minus_one_square: bool) -> i8 {
    let mut s = 1;
    if a.odd_valuation && b.odd_valuation && !minus_one_square {
        s = -s;
    }
    if b.odd_valuation && a.unit_nonsquare {
        s = -s;
    }
    if a.odd_valuation && b.unit_nonsquare {
        s = -s;
    }
    s
}

pub fn local_mul(a: LocalSquareClass, b: LocalSquareClass) -> LocalSquareClass {
    LocalSquareClass { odd_valuation: a.odd_valuation ^ b.odd_valuation, unit_nonsquare: a.unit_nonsquare ^ b.unit_nonsquare }
}

fn minus_one_class(v: &Place, p: u32) -> LocalSquareClass {
    LocalSquareClass { odd_valuation: false, unit_nonsquare: !v.minus_one_is_square(p) }
}

/// Local isotropy over a non-dyadic completion from rank, discriminant and Hasse invariant.
pub fn local_isotropy(rank: usize, disc: LocalSquareClass, hasse: i8, v: &Place, p: u32) -> bool {
    let m1 = minus_one_class(v, p);
    match rank {
        0 | 1 => false,
        // <a, b> is isotropic iff -ab is a square
        2 => local_mul(m1, disc).is_trivial(),
        // isotropic iff hasse = (-1, -d)
        3 => hasse == local_symbol(m1, local_mul(m1, disc), v.minus_one_is_square(p)),
        // isotropic iff d is not a square, or d is a square and hasse = (-1, -1)
        4 => !disc.is_trivial() || hasse == local_symbol(m1, m1, v.minus_one_is_square(p)),
        _ => true,
    }
}

/// Hasse invariant of `<1,-1,...>` of rank `n` at `v`.
fn hyperbolic_hasse(n: usize, v: &Place, p: u32) -> i8 {
    let m = (n / 2) as i64;
    let pairs = m * (m - 1) / 2;
    let s = local_symbol(minus_one_class(v, p), minus_one_class(v, p), v.minus_one_is_square(p));
    if pairs % 2 == 1 {
        s
    } else {
        1
    }
}

/// A diagonalized form, ready for local evaluations.
#[derive(Clone, Debug)]
pub struct DiagonalData {
    entries: Vec<RatFunc>,
    disc: SquareClass,
    bad: BTreeSet<Place>,
}

impl DiagonalData {
    pub fn new(entries: Vec<RatFunc>) -> Result<DiagonalData> {
        if entries.iter().any(|e| e.is_zero()) {
            return Err(Error::Degenerate);
        }
        let disc = disc_of(&entries)?;
        let bad = support_of(&entries);
        Ok(DiagonalData { entries, disc, bad })
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn disc(&self) -> &SquareClass {
        &self.disc
    }

    pub fn bad_places(&self) -> &BTreeSet<Place> {
        &self.bad
    }

    fn prime(&self) -> u32 {
        self.disc.squarefree.prime()
    }

    pub fn local_disc(&self, v: &Place) -> LocalSquareClass {
        self.disc.local(v)
    }

    /// `prod_{i<j} (a_i, a_j)_v`, accumulated as `prod_j (a_1...a_{j-1}, a_j)_v`.
    pub fn hasse(&self, v: &Place) -> i8 {
        let sq = v.minus_one_is_square(self.prime());
        let mut prefix = LocalSquareClass { odd_valuation: false, unit_nonsquare: false };
        let mut s = 1;
        for e in &self.entries {
            let c = LocalSquareClass::of(e, v).expect("nonzero entry");
            s *= local_symbol(prefix, c, sq);
            prefix = local_mul(prefix, c);
        }
        s
    }

    pub fn invariants(&self) -> Result<LocalInvariants> {
        let hasse_minus = self.bad.iter().filter(|v| self.hasse(v) == -1).cloned().collect();
        Ok(LocalInvariants { rank: self.rank(), disc: self.disc.clone(), hasse_minus, checked: self.bad.clone() })
    }

    pub fn is_isotropic_at(&self, v: &Place) -> bool {
        local_isotropy(self.rank(), self.local_disc(v), self.hasse(v), v, self.prime())
    }

    /// Rank 2 needs `-d` to be a global square; from rank 3 on, places outside the
    /// bad set see a unimodular form of rank at least 3, which is isotropic.
    pub fn is_isotropic(&self) -> Result<bool> {
        let p = self.prime();
        Ok(match self.rank() {
            0 | 1 => false,
            2 => self.disc.mul(&SquareClass::of(&RatFunc::constant(-1, p))?).is_trivial(),
            _ => self.bad.iter().all(|v| self.is_isotropic_at(v)),
        })
    }

    pub fn is_hyperbolic_at(&self, v: &Place) -> Result<bool> {
        let n = self.rank();
        if n % 2 == 1 {
            return Err(Error::pre("hyperbolicity needs even rank"));
        }
        let p = self.prime();
        let target = hyperbolic_disc(n, p)?;
        Ok(self.local_disc(v) == target.local(v) && self.hasse(v) == hyperbolic_hasse(n, v, p))
    }

    pub fn is_hyperbolic(&self) -> Result<bool> {
        let n = self.rank();
        if n % 2 == 1 {
            return Err(Error::pre("hyperbolicity needs even rank"));
        }
        if self.disc != hyperbolic_disc(n, self.prime())? {
            return Ok(false);
        }
        for v in &self.bad {
            if !self.is_hyperbolic_at(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equivalent_at(&self, other: &DiagonalData, v: &Place) -> bool {
        self.rank() == other.rank() && self.local_disc(v) == other.local_disc(v) && self.hasse(v) == other.hasse(v)
    }

    pub fn equivalent(&self, other: &DiagonalData) -> bool {
        self.rank() == other.rank()
            && self.disc == other.disc
            && self.bad.union(&other.bad).all(|v| self.equivalent_at(other, v))
    }
}

fn hyperbolic_disc(n: usize, p: u32) -> Result<SquareClass> {
    let sign = if (n / 2).is_multiple_of(2) { 1 } else { -1 };
    SquareClass::of(&RatFunc::constant(sign, p))
}

pub fn equivalent_local(q: &QuadForm, q2: &QuadForm, v: &Place) -> Result<bool> {
    Ok(q.local_data()?.equivalent_at(&q2.local_data()?, v))
}

pub fn equivalent_global(q: &QuadForm, q2: &QuadForm) -> Result<bool> {
    if q.rank() != q2.rank() {
        return Ok(false);
    }
    Ok(q.local_data()?.equivalent(&q2.local_data()?))
}
