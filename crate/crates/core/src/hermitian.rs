//! Hermitian elements of endomorphism algebras with involution, their classes,
//! and local and global comparison of classes.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::algebra::{elem_add, elem_is_zero, elem_scale, Elem, InvolutionAlgebra, Quotient};
use crate::csa::{clifford_pair, involution_kind, CliffordPair, InvolutionKind};
use crate::error::{Error, Result};
use crate::funcfield::{LocalSquareClass, Place, RatFunc};
use crate::grpalg::{EndAlgebra, GModule};
use crate::linalg::{Matrix, SparseMatrix};
use crate::quadform::QuadForm;

/// Checks `g^T A g = A` for every generator.
pub fn check_invariant(m: &GModule, q: &QuadForm) -> Result<()> {
    let a = q.gram();
    if a.rows() != m.dim() {
        return Err(Error::input(format!("form has rank {} but the module has dimension {}", a.rows(), m.dim())));
    }
    for (name, g) in m.generators.iter().zip(&m.action) {
        if &(&g.transpose() * a) * g != *a {
            return Err(Error::pre(format!("form is not invariant under {name}")));
        }
    }
    Ok(())
}

/// `X -> A^-1 X^T A` on matrices.
pub fn adjoint_matrix(a: &Matrix, a_inv: &Matrix, x: &Matrix) -> Matrix {
    &(a_inv * &x.transpose()) * a
}

/// The adjoint involution of a G-invariant form, restricted to `End_{k[G]}(V)`.
pub fn induced_involution(m: &GModule, q: &QuadForm, end: &EndAlgebra) -> Result<InvolutionAlgebra> {
    check_invariant(m, q)?;
    let a = SparseMatrix::from_dense(q.gram());
    let a_inv = SparseMatrix::from_dense(&q.gram().inverse().ok_or(Error::Degenerate)?);
    let images: Vec<Elem> = end
        .basis
        .iter()
        .map(|x| {
            let img = a_inv.mul(&x.transpose()).mul(&a);
            end.coords_of(&img).ok_or_else(|| Error::cert("adjoint of an endomorphism leaves the endomorphism algebra"))
        })
        .collect::<Result<_>>()?;
    let gamma = InvolutionAlgebra::from_images(end.alg.clone(), &images);
    gamma.verify(4096)?;
    Ok(gamma)
}

/// `q(X v, w) = q(v, gamma(X) w)` for every basis endomorphism, as `X^T A = A gamma(X)`.
pub fn check_adjoint_identity(q: &QuadForm, end: &EndAlgebra, gamma: &InvolutionAlgebra) -> bool {
    let a = SparseMatrix::from_dense(q.gram());
    (0..end.dim()).all(|j| {
        let x = &end.basis[j];
        let gx = end.matrix_of(&gamma.apply(&end.alg.basis(j)));
        x.transpose().mul(&a) == a.mul(&gx)
    })
}

/// `u = A^-1 A'`, a hermitian unit whose class corresponds to `q'`.
pub fn class_element(q: &QuadForm, q2: &QuadForm, end: &EndAlgebra, gamma: &InvolutionAlgebra) -> Result<Elem> {
    let a_inv = q.gram().inverse().ok_or(Error::Degenerate)?;
    if q2.gram().inverse().is_none() {
        return Err(Error::Degenerate);
    }
    let u = SparseMatrix::from_dense(&(&a_inv * q2.gram()));
    let coords = end.coords_of(&u).ok_or_else(|| Error::pre("the forms are not both G-invariant"))?;
    if gamma.apply(&coords) != coords {
        return Err(Error::cert("class element is not hermitian"));
    }
    Ok(coords)
}

/// Whether `x` is a unit, tested in the faithful representation.
pub fn is_unit(ia: &InvolutionAlgebra, x: &[RatFunc]) -> bool {
    ia.alg.rep_of(x).to_dense().inverse().is_some()
}

/// `sigma(e) u e = u'` with `e` invertible.
pub fn witness_check(ia: &InvolutionAlgebra, u: &[RatFunc], u2: &[RatFunc], e: &[RatFunc]) -> bool {
    if !is_unit(ia, e) {
        return false;
    }
    let alg = &ia.alg;
    alg.mul(&alg.mul(&ia.apply(e), u), e) == u2
}

/// `C(2k, k) mod p` by Lucas' theorem.
fn central_binomial_mod(k: usize, p: u32) -> u32 {
    let p = p as usize;
    let mut n = 2 * k;
    let mut r = k;
    let mut acc = 1usize;
    while r > 0 || n > 0 {
        let (nd, rd) = (n % p, r % p);
        if rd > nd {
            return 0;
        }
        let mut c = 1usize;
        for i in 0..rd {
            c = c * (nd - i) % p;
        }
        let mut f = 1usize;
        for i in 1..=rd {
            f = f * i % p;
        }
        acc = acc * c % p * modinv(f, p) % p;
        n /= p;
        r /= p;
    }
    acc as u32
}

fn modinv(a: usize, p: usize) -> usize {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// For `u = 1 + r` with `r` nilpotent and symmetric, `e = u^(-1/2)` from the binomial
/// series `sum (-1)^k C(2k,k) 4^-k r^k`; then `sigma(e) u e = 1`.
pub fn unipotent_witness(ia: &InvolutionAlgebra, u: &[RatFunc]) -> Result<Elem> {
    let p = ia.prime();
    let alg = &ia.alg;
    let r = crate::algebra::elem_sub(u, alg.one());
    if ia.apply(&r) != r {
        return Err(Error::pre("element is not symmetric"));
    }
    let quarter = RatFunc::constant(4, p).inv();
    let mut e = alg.one().clone();
    let mut power = alg.one().clone();
    let mut coeff = RatFunc::one(p);
    for k in 1..=alg.dim() + 1 {
        power = alg.mul(&power, &r);
        if elem_is_zero(&power) {
            if !witness_check(ia, u, alg.one(), &e) {
                return Err(Error::cert("binomial witness does not reduce u to 1"));
            }
            return Ok(e);
        }
        coeff = &coeff * &quarter;
        let c = &coeff * &RatFunc::constant(if k % 2 == 0 { 1 } else { -1 } * central_binomial_mod(k, p) as i64, p);
        e = elem_add(&e, &elem_scale(&power, &c));
    }
    Err(Error::pre("u - 1 is not nilpotent"))
}

pub fn project_class(q: &Quotient, u: &[RatFunc]) -> Elem {
    q.project(u)
}

/// A hermitian unit of the parent mapping to `ubar`: the symmetrized lift, shifted by
/// symmetrized radical elements if it is not invertible.
pub fn lift_class(gamma: &InvolutionAlgebra, q: &Quotient, ubar: &[RatFunc]) -> Result<Elem> {
    let p = gamma.prime();
    let half = RatFunc::constant(2, p).inv();
    let sym = |x: &Elem| elem_scale(&elem_add(x, &gamma.apply(x)), &half);
    let base = sym(&q.lift(ubar));
    let mut candidates = vec![base.clone()];
    for r in q.ideal_basis() {
        let s = sym(&r);
        if !elem_is_zero(&s) {
            candidates.push(elem_add(&base, &s));
        }
    }
    for u in candidates {
        if q.project(&u) == ubar && gamma.apply(&u) == u && is_unit(gamma, &u) {
            return Ok(u);
        }
    }
    Err(Error::cert("no invertible hermitian lift found"))
}

/// Local isomorphism data of a hermitian class at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalRecord {
    /// Quadratic form `A u` on a split matrix component: rank, discriminant and Hasse invariant.
    Form { rank: usize, disc: LocalSquareClass, hasse: i8 },
    /// Degree-4 orthogonal involution `Int(u^-1) o sigma`: discriminant and whether each
    /// Clifford factor ramifies (sorted), as a rank-2 hermitian form over the quaternion class.
    Degree4 { rank: usize, disc: LocalSquareClass, clifford: [bool; 2] },
}

impl LocalRecord {
    pub fn to_json(&self) -> Value {
        match self {
            LocalRecord::Form { rank, disc, hasse } => json!({ "rank": rank, "disc": disc.to_string(), "hasse": hasse }),
            LocalRecord::Degree4 { rank, disc, clifford } => {
                json!({ "rank": rank, "disc": disc.to_string(), "clifford_ramified": clifford })
            }
        }
    }
}

/// Record of the quadratic form with Gram matrix `A u` at `v`.
pub fn local_form_record(a: &Matrix, u: &Matrix, v: &Place) -> Result<LocalRecord> {
    let g = a * u;
    if !g.is_symmetric() {
        return Err(Error::cert("Morita Gram matrix A u is not symmetric"));
    }
    let data = QuadForm::new(g)?.local_data()?;
    Ok(LocalRecord::Form { rank: data.rank(), disc: data.local_disc(v), hasse: data.hasse(v) })
}

/// Clifford data of the twisted involution `Int(u^-1) o sigma` on a degree-4 orthogonal component.
#[derive(Clone, Debug)]
pub struct Degree4Class {
    pub pair: CliffordPair,
}

impl Degree4Class {
    pub fn new(comp: &InvolutionAlgebra, u: &[RatFunc]) -> Result<Degree4Class> {
        if comp.dim() != 16 {
            return Err(Error::Unsupported("local invariants need a degree-4 component".into()));
        }
        if comp.apply(u) != u || !is_unit(comp, u) {
            return Err(Error::pre("element is not a hermitian unit"));
        }
        let twisted = comp.twisted(u)?;
        if involution_kind(&twisted)?.kind != InvolutionKind::Orthogonal {
            return Err(Error::Unsupported("local invariants need an orthogonal involution".into()));
        }
        Ok(Degree4Class { pair: clifford_pair(&twisted)? })
    }

    pub fn record(&self, v: &Place) -> Result<LocalRecord> {
        let disc = LocalSquareClass::of(&self.pair.discriminant, v)?;
        let [a, b] = self.pair.ramification_pair().ok_or_else(|| {
            Error::Unsupported("discriminant is not a square; Clifford factors are not defined over k".into())
        })?;
        let mut clifford = [a.contains(v), b.contains(v)];
        clifford.sort();
        Ok(LocalRecord::Degree4 { rank: 2, disc, clifford })
    }

    pub fn hyperbolic_at(&self, v: &Place) -> Result<bool> {
        self.pair.hyperbolic_at(v).ok_or_else(|| Error::Unsupported("discriminant is not a square".into()))
    }

    /// Places where a Clifford factor ramifies.
    pub fn bad_places(&self) -> BTreeSet<Place> {
        self.pair.ramification_pair().map(|[a, b]| a.union(&b).cloned().collect()).unwrap_or_default()
    }
}

/// Local record of `u` at `v`: form invariants of `A u` when a Gram matrix for a split
/// matrix component is supplied (with `u` given as a matrix), Clifford data otherwise.
pub fn local_class_invariants(comp: &InvolutionAlgebra, u: &[RatFunc], v: &Place, gram: Option<&Matrix>) -> Result<LocalRecord> {
    match gram {
        Some(a) => {
            let n = a.rows();
            if u.len() != n * n {
                return Err(Error::Unsupported("element is not a matrix of the Gram size".into()));
            }
            local_form_record(a, &Matrix::from_flat(a.prime(), n, n, u.to_vec()), v)
        }
        None => Degree4Class::new(comp, u)?.record(v),
    }
}

pub fn local_hyperbolicity(comp: &InvolutionAlgebra, v: &Place, gram: Option<&Matrix>) -> Result<bool> {
    match gram {
        Some(a) => QuadForm::new(a.clone())?.is_hyperbolic_at(v),
        None => Degree4Class::new(comp, comp.alg.one())?.hyperbolic_at(v),
    }
}

/// A hermitian unit that is locally trivial everywhere but globally nontrivial.
#[derive(Clone, Debug)]
pub struct CounterexampleElement {
    pub u: Elem,
    pub base: Degree4Class,
    pub twisted: Degree4Class,
    /// Places where some Clifford factor of either involution ramifies.
    pub checked: BTreeSet<Place>,
    pub records: Vec<(Place, LocalRecord, LocalRecord)>,
    pub certificate: Value,
}

/// Searches `u = x y` with `x`, `y` in the two simple factors of the skew Lie algebra.
///
/// Such `u` are symmetric with square reduced norm, so `Int(u^-1) o sigma` keeps a trivial
/// discriminant. The class of `u` differs from that of 1 as soon as the unordered pair of
/// Clifford factors changes, since isometric hermitian forms give conjugate involutions.
/// Local triviality holds where both involutions are hyperbolic, which covers every place
/// outside the ramification of the Clifford factors.
pub fn counterexample_element(comp: &InvolutionAlgebra) -> Result<CounterexampleElement> {
    let p = comp.prime();
    let base = Degree4Class::new(comp, comp.alg.one())?;
    let ram = base.pair.algebra_ramification().ok_or_else(|| Error::pre("involution has nontrivial discriminant"))?;
    if ram.is_empty() {
        return Err(Error::pre("the component is split; no quaternion division algebra is involved"));
    }
    for v in base.bad_places() {
        if !base.hyperbolic_at(&v)? {
            return Err(Error::pre(format!("the involution is not hyperbolic at {v}")));
        }
    }
    let [fp, fm] = base.pair.factors.as_ref().expect("trivial discriminant");
    let base_pair = base.pair.ramification_pair().expect("trivial discriminant");
    let mut xs: Vec<Elem> = fp.basis.clone();
    let mut ys: Vec<Elem> = fm.basis.clone();
    for list in [&mut xs, &mut ys] {
        let n = list.len();
        for a in 0..n {
            for b in a + 1..n {
                let s = elem_add(&list[a], &list[b]);
                list.push(s);
                let s = elem_add(&list[a], &elem_scale(&list[b], &RatFunc::t(p)));
                list.push(s);
            }
        }
    }
    for x in &xs {
        for y in &ys {
            let u = comp.alg.mul(x, y);
            if comp.apply(&u) != u || !is_unit(comp, &u) {
                continue;
            }
            let Ok(twisted) = Degree4Class::new(comp, &u) else { continue };
            let Some(pair) = twisted.pair.ramification_pair() else { continue };
            if pair == base_pair {
                continue;
            }
            let checked: BTreeSet<Place> = base.bad_places().union(&twisted.bad_places()).cloned().collect();
            let mut records = Vec::new();
            let mut ok = true;
            for v in &checked {
                let (ru, r1) = (twisted.record(v)?, base.record(v)?);
                if !twisted.hyperbolic_at(v)? || ru != r1 {
                    ok = false;
                    break;
                }
                records.push((v.clone(), ru, r1));
            }
            if !ok {
                continue;
            }
            let names = |s: &[BTreeSet<Place>; 2]| -> Value {
                json!(s.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            };
            let certificate = json!({
                "invariant": "unordered pair of ramification sets of the Clifford factors of Int(u^-1) o sigma",
                "value_u": names(&pair),
                "value_1": names(&base_pair),
                "differs": true,
            });
            return Ok(CounterexampleElement { u, base, twisted, checked, records, certificate });
        }
    }
    Err(Error::cert("no counterexample produced"))
}
