//! Quaternion algebras over F_p(t), the sandwich isomorphism `H (x) H^op -> M_4`,
//! the involutions built from it, and classification of involutions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{elem_add, elem_is_zero, elem_scale, unit_elem, Algebra, Elem, InvolutionAlgebra};
use crate::error::{Error, Result};
use crate::funcfield::{hilbert_symbol, support, Place, RatFunc};
use crate::linalg::{sparse_from_dense, Echelon, Matrix, SparseVec};
use crate::quadform::QuadForm;

pub type QuatElem = [RatFunc; 4];

/// The quaternion algebra `(a, b)`: `i^2 = a`, `j^2 = b`, `ij = -ji`, basis `1, i, j, ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quaternion {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl Quaternion {
    pub fn new(a: RatFunc, b: RatFunc) -> Result<Quaternion> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument("quaternion algebra"));
        }
        Ok(Quaternion { a, b })
    }

    pub fn parse(a: &str, b: &str, p: u32) -> Result<Quaternion> {
        Quaternion::new(crate::funcfield::parse_ratfunc(a, p)?, crate::funcfield::parse_ratfunc(b, p)?)
    }

    pub fn prime(&self) -> u32 {
        self.a.prime()
    }

    pub fn elem(&self, c: [i64; 4]) -> QuatElem {
        let p = self.prime();
        c.map(|x| RatFunc::constant(x, p))
    }

    /// The basis element `1, i, j, ij` with index `r`.
    pub fn basis(&self, r: usize) -> QuatElem {
        let mut c = [0; 4];
        c[r] = 1;
        self.elem(c)
    }

    pub fn mul(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        let m = |u: &RatFunc, v: &RatFunc| u * v;
        let c0 = &(&(&m(&x[0], &y[0]) + &(a * &m(&x[1], &y[1]))) + &(b * &m(&x[2], &y[2]))) - &(&ab * &m(&x[3], &y[3]));
        let c1 = &(&(&m(&x[0], &y[1]) + &m(&x[1], &y[0])) - &(b * &m(&x[2], &y[3]))) + &(b * &m(&x[3], &y[2]));
        let c2 = &(&(&m(&x[0], &y[2]) + &m(&x[2], &y[0])) + &(a * &m(&x[1], &y[3]))) - &(a * &m(&x[3], &y[1]));
        let c3 = &(&(&m(&x[0], &y[3]) + &m(&x[3], &y[0])) + &m(&x[1], &y[2])) - &m(&x[2], &y[1]);
        [c0, c1, c2, c3]
    }

    pub fn conj(&self, x: &QuatElem) -> QuatElem {
        [x[0].clone(), -&x[1], -&x[2], -&x[3]]
    }

    /// `x conj(x) = x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn nrd(&self, x: &QuatElem) -> RatFunc {
        self.mul(x, &self.conj(x))[0].clone()
    }

    pub fn trd(&self, x: &QuatElem) -> RatFunc {
        &x[0] + &x[0]
    }

    pub fn norm_form(&self) -> QuadForm {
        let p = self.prime();
        let ab = &self.a * &self.b;
        QuadForm::diagonal(p, &[RatFunc::one(p), -&self.a, -&self.b, ab])
    }

    pub fn ramification_set(&self) -> Result<BTreeSet<Place>> {
        let mut out = BTreeSet::new();
        for v in support(&self.a, &self.b)? {
            if hilbert_symbol(&self.a, &self.b, &v)? == -1 {
                out.insert(v);
            }
        }
        Ok(out)
    }

    pub fn is_split(&self) -> Result<bool> {
        Ok(self.ramification_set()?.is_empty())
    }

    /// `tau(x) = (ij) conj(x) (ij)^-1`.
    pub fn tau(&self, x: &QuatElem) -> QuatElem {
        let k = self.basis(3);
        let nab = -(&self.a * &self.b);
        let kinv = self.basis(3).map(|c| &c / &nab);
        self.mul(&self.mul(&k, &self.conj(x)), &kinv)
    }

    /// Matrix of `z -> x z y` on the basis `1, i, j, ij`.
    pub fn sandwich(&self, x: &QuatElem, y: &QuatElem) -> Matrix {
        let p = self.prime();
        let mut m = Matrix::zeros(p, 4, 4);
        for c in 0..4 {
            let img = self.mul(&self.mul(x, &self.basis(c)), y);
            for (r, v) in img.into_iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// `a_1 = f(1 (x) 1)`, `a_2 = f(i (x) 1)`, `a_3 = f(j (x) 1)`.
    pub fn a_matrices(&self) -> [Matrix; 3] {
        let one = self.basis(0);
        [self.sandwich(&one, &one), self.sandwich(&self.basis(1), &one), self.sandwich(&self.basis(2), &one)]
    }

    /// Structure constants on `1, i, j, ij`; `opposite` reverses the product.
    pub fn algebra(&self, opposite: bool) -> Algebra {
        let p = self.prime();
        let table = (0..4)
            .map(|r| {
                (0..4)
                    .map(|s| {
                        let prod = if opposite {
                            self.mul(&self.basis(s), &self.basis(r))
                        } else {
                            self.mul(&self.basis(r), &self.basis(s))
                        };
                        sparse_from_dense(&prod)
                    })
                    .collect()
            })
            .collect();
        Algebra::from_table(p, table, unit_elem(p, 4, 0))
    }

    /// `(H, conj)`, or `(H^op, conj)` when `opposite`.
    pub fn with_canonical(&self, opposite: bool) -> InvolutionAlgebra {
        let images: Vec<Elem> = (0..4).map(|r| self.conj(&self.basis(r)).to_vec()).collect();
        InvolutionAlgebra::from_images(self.algebra(opposite), &images)
    }

    pub fn with_tau(&self) -> InvolutionAlgebra {
        let images: Vec<Elem> = (0..4).map(|r| self.tau(&self.basis(r)).to_vec()).collect();
        InvolutionAlgebra::from_images(self.algebra(false), &images)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

pub fn quat_mul(h: &Quaternion, x: &QuatElem, y: &QuatElem) -> QuatElem {
    h.mul(x, y)
}

pub fn quat_conj(h: &Quaternion, x: &QuatElem) -> QuatElem {
    h.conj(x)
}

/// `f : H (x) H^op -> M_4(k)`, `f(x (x) y) = (z -> x z y)`.
#[derive(Clone, Debug)]
pub struct SandwichIso {
    pub h: Quaternion,
    /// `f(e_r (x) e_s)` at index `4 r + s`.
    pub images: Vec<Matrix>,
    /// Columns: flattened images; its inverse gives preimages.
    inverse: Matrix,
}

impl SandwichIso {
    pub fn new(h: &Quaternion) -> Result<SandwichIso> {
        let p = h.prime();
        let images: Vec<Matrix> = (0..16).map(|k| h.sandwich(&h.basis(k / 4), &h.basis(k % 4))).collect();
        let cols = Matrix::from_fn(p, 16, 16, |r, c| images[c].data()[r].clone());
        let inverse = cols.inverse().ok_or_else(|| Error::cert("sandwich map is not bijective"))?;
        let iso = SandwichIso { h: h.clone(), images, inverse };
        iso.verify_homomorphism()?;
        Ok(iso)
    }

    /// `f((x (x) y)(x' (x) y')) = f(x (x) y) f(x' (x) y')`, where the second factor multiplies in `H^op`.
    fn verify_homomorphism(&self) -> Result<()> {
        let h = &self.h;
        for k1 in 0..16 {
            for k2 in 0..16 {
                let x = h.mul(&h.basis(k1 / 4), &h.basis(k2 / 4));
                let y = h.mul(&h.basis(k2 % 4), &h.basis(k1 % 4));
                let lhs = h.sandwich(&x, &y);
                if lhs != &self.images[k1] * &self.images[k2] {
                    return Err(Error::cert(format!("sandwich map fails on basis product ({k1}, {k2})")));
                }
            }
        }
        Ok(())
    }

    pub fn image(&self, x: &QuatElem, y: &QuatElem) -> Matrix {
        self.h.sandwich(x, y)
    }

    /// Coordinates of `m` on the basis `f(e_r (x) e_s)`.
    pub fn preimage(&self, m: &Matrix) -> Vec<RatFunc> {
        self.inverse.mul_vec(m.data())
    }
}

/// `M_n(k)` on the matrix units `E_ij` (index `n i + j`).
pub fn full_matrix_algebra(p: u32, n: usize) -> Algebra {
    let units: Vec<Matrix> = (0..n * n).map(|k| matrix_unit(p, n, k / n, k % n)).collect();
    Algebra::from_matrices(p, &units).expect("matrix units span a matrix algebra").0
}

pub fn matrix_unit(p: u32, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(p, n, n);
    m[(i, j)] = RatFunc::one(p);
    m
}

fn flat_to_matrix(p: u32, n: usize, v: &[RatFunc]) -> Matrix {
    Matrix::from_flat(p, n, n, v.to_vec())
}

/// The involution `X -> g(X)` of `M_n(k)` on matrix units, for any map `g`.
pub fn matrix_involution(p: u32, n: usize, g: impl Fn(&Matrix) -> Matrix) -> InvolutionAlgebra {
    let images: Vec<Elem> = (0..n * n).map(|k| g(&matrix_unit(p, n, k / n, k % n)).into_data()).collect();
    InvolutionAlgebra::from_images(full_matrix_algebra(p, n), &images)
}

/// The adjoint involution `X -> A^-1 X^T A` of a symmetric or skew invertible `A`.
pub fn adjoint_involution(a: &Matrix) -> Result<InvolutionAlgebra> {
    let ainv = a.inverse().ok_or_else(|| Error::pre("matrix is not invertible"))?;
    Ok(matrix_involution(a.prime(), a.rows(), |x| &(&ainv * &x.transpose()) * a))
}

/// `rho = f o (tau (x) conj) o f^-1` on `M_4(k)`.
pub fn rho_involution(h: &Quaternion) -> Result<InvolutionAlgebra> {
    let iso = SandwichIso::new(h)?;
    let p = h.prime();
    let twisted: Vec<Matrix> = (0..16).map(|k| iso.image(&h.tau(&h.basis(k / 4)), &h.conj(&h.basis(k % 4)))).collect();
    let rho = matrix_involution(p, 4, |x| {
        let c = iso.preimage(x);
        let mut acc = Matrix::zeros(p, 4, 4);
        for (ck, m) in c.iter().zip(&twisted) {
            if !ck.is_zero() {
                acc = &acc + &m.scale(ck);
            }
        }
        acc
    });
    rho.verify(256)?;
    Ok(rho)
}

/// Skew `alpha` with `rho(x) = alpha^-1 x^T alpha`, normalized so that its first
/// nonzero entry in row-major order is 1.
pub fn solve_alpha(rho: &InvolutionAlgebra) -> Result<Matrix> {
    let p = rho.prime();
    let d = rho.dim();
    let n = (d as f64).sqrt().round() as usize;
    if n * n != d {
        return Err(Error::pre("involution is not on a full matrix algebra"));
    }
    // alpha rho(E_ij) - E_ji alpha = 0, unknowns alpha[k][l] at n k + l
    let mut ech = Echelon::new(p, d);
    for i in 0..n {
        for j in 0..n {
            let img = flat_to_matrix(p, n, &rho.apply(&unit_elem(p, d, n * i + j)));
            for k in 0..n {
                for l in 0..n {
                    let mut row: Vec<(usize, RatFunc)> = (0..n).map(|m| (n * k + m, img[(m, l)].clone())).collect();
                    if k == j {
                        row.push((n * i + l, -RatFunc::one(p)));
                    }
                    let row = combine(row);
                    if !row.is_empty() {
                        ech.insert(&row);
                    }
                }
            }
        }
    }
    let sols = ech.nullspace();
    if sols.len() != 1 {
        return Err(Error::pre(format!("expected a one-dimensional solution space for alpha, found {}", sols.len())));
    }
    let mut flat = vec![RatFunc::zero(p); d];
    for (i, x) in &sols[0] {
        flat[*i] = x.clone();
    }
    let lead = flat.iter().find(|x| !x.is_zero()).expect("nonzero solution").inv();
    let alpha = flat_to_matrix(p, n, &flat).scale(&lead);
    if !alpha.is_skew() {
        return Err(Error::pre("the involution is not symplectic: alpha is not skew"));
    }
    let ainv = alpha.inverse().ok_or_else(|| Error::pre("alpha is singular"))?;
    for k in 0..d {
        let e = flat_to_matrix(p, n, &unit_elem(p, d, k));
        let expect = flat_to_matrix(p, n, &rho.apply(&unit_elem(p, d, k)));
        if &(&ainv * &e.transpose()) * &alpha != expect {
            return Err(Error::cert("alpha does not reproduce the involution"));
        }
    }
    Ok(alpha)
}

fn combine(mut row: Vec<(usize, RatFunc)>) -> SparseVec {
    row.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::new();
    for (i, x) in row {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionKind {
    Unitary,
    Orthogonal,
    Symplectic,
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvolutionKind::Unitary => "unitary",
            InvolutionKind::Orthogonal => "orthogonal",
            InvolutionKind::Symplectic => "symplectic",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KindReport {
    pub kind: InvolutionKind,
    pub sym_dim: usize,
    /// Degree over the center.
    pub degree: usize,
    pub center_dim: usize,
}

/// Unitary if the center is moved; otherwise orthogonal or symplectic by the
/// dimension of the symmetric elements, `m(m+1)/2` or `m(m-1)/2`.
pub fn involution_kind(ia: &InvolutionAlgebra) -> Result<KindReport> {
    let center = ia.alg.center();
    let sym_dim = ia.symmetric().len();
    let cd = center.len();
    let moved = center.iter().any(|z| ia.apply(z) != *z);
    let d = ia.dim();
    let degree_over = |c: usize| {
        let m = ((d / c) as f64).sqrt().round() as usize;
        (m * m * c == d).then_some(m)
    };
    if moved {
        let m = degree_over(cd).ok_or_else(|| Error::pre("decompose first: dimension is not a square over the center"))?;
        return Ok(KindReport { kind: InvolutionKind::Unitary, sym_dim, degree: m, center_dim: cd });
    }
    if cd != 1 {
        return Err(Error::pre("decompose first: center is larger than k and fixed by the involution"));
    }
    let m = degree_over(1).ok_or_else(|| Error::pre("decompose first: dimension is not a square"))?;
    let kind = if sym_dim == m * (m + 1) / 2 {
        InvolutionKind::Orthogonal
    } else if sym_dim == m * (m - 1) / 2 {
        InvolutionKind::Symplectic
    } else {
        return Err(Error::pre(format!("decompose first: {sym_dim} symmetric elements in degree {m}")));
    };
    Ok(KindReport { kind, sym_dim, degree: m, center_dim: cd })
}

/// `(A (x) B, iota (x) kappa)` on the product basis `e_a (x) f_b` at index `a dim(B) + b`.
pub fn tensor_involution_algebras(x: &InvolutionAlgebra, y: &InvolutionAlgebra) -> InvolutionAlgebra {
    let p = x.prime();
    let (da, db) = (x.dim(), y.dim());
    let mut table = Vec::with_capacity(da * db);
    for a in 0..da {
        for b in 0..db {
            let mut row = Vec::with_capacity(da * db);
            for a2 in 0..da {
                for b2 in 0..db {
                    let mut v: SparseVec = Vec::new();
                    for (i, c) in x.alg.product(a, a2) {
                        for (j, d) in y.alg.product(b, b2) {
                            v.push((i * db + j, c * d));
                        }
                    }
                    row.push(v);
                }
            }
            table.push(row);
        }
    }
    let mut one = Vec::with_capacity(da * db);
    for u in x.alg.one() {
        for w in y.alg.one() {
            one.push(u * w);
        }
    }
    let rep: Vec<_> = x.alg.rep().iter().flat_map(|ra| y.alg.rep().iter().map(move |rb| ra.kron(rb))).collect();
    let alg = Algebra::from_parts(p, table, one, rep);
    InvolutionAlgebra::new(alg, x.inv.kron(&y.inv))
}

/// Ramification data of `H_1^op (x) H_2^op ~ M_2(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorClass {
    pub ram1: BTreeSet<Place>,
    pub ram2: BTreeSet<Place>,
    pub ram_q: BTreeSet<Place>,
    pub q_division: bool,
}

pub fn tensor_m2q(h1: &Quaternion, h2: &Quaternion) -> Result<TensorClass> {
    let ram1 = h1.ramification_set()?;
    let ram2 = h2.ramification_set()?;
    let ram_q: BTreeSet<Place> = ram1.symmetric_difference(&ram2).cloned().collect();
    let q_division = !ram_q.is_empty();
    Ok(TensorClass { ram1, ram2, ram_q, q_division })
}

/// A presentation `(a, b)` of a four-dimensional central algebra, with the elements realizing it.
#[derive(Clone, Debug)]
pub struct QuatPresentation {
    pub quaternion: Quaternion,
    pub i: Elem,
    pub j: Elem,
}

/// Reduced trace of `x` in a central simple algebra of degree `m` (regular trace / m).
pub fn reduced_trace(alg: &Algebra, x: &[RatFunc], degree: usize) -> RatFunc {
    let tr = alg.left_matrix(x).trace();
    &tr / &RatFunc::constant(degree as i64, alg.prime())
}

fn scalar_of(alg: &Algebra, x: &[RatFunc]) -> Option<RatFunc> {
    let one = alg.one();
    let k = one.iter().position(|c| !c.is_zero())?;
    let c = &x[k] / &one[k];
    (elem_scale(one, &c) == x).then_some(c)
}

/// Small combinations of the basis vectors, used as search candidates.
fn candidates(p: u32, basis: &[Elem]) -> Vec<Elem> {
    let mut out: Vec<Elem> = basis.to_vec();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            out.push(elem_add(&basis[a], &basis[b]));
            out.push(elem_add(&basis[a], &elem_scale(&basis[b], &RatFunc::t(p))));
        }
    }
    out
}

/// Finds `x, y` of trace zero with `x^2, y^2` nonzero scalars and `xy = -yx`.
pub fn extract_quaternion(alg: &Algebra) -> Result<QuatPresentation> {
    let p = alg.prime();
    if alg.dim() != 4 {
        return Err(Error::pre("quaternion extraction needs a four-dimensional algebra"));
    }
    if alg.center().len() != 1 {
        return Err(Error::pre("algebra is not central"));
    }
    let traces: Vec<RatFunc> = (0..4).map(|j| reduced_trace(alg, &alg.basis(j), 2)).collect();
    let pure = Matrix::from_rows(p, vec![traces]).nullspace();
    let mut found = None;
    for x in candidates(p, &pure) {
        if let Some(a) = scalar_of(alg, &alg.mul(&x, &x)) {
            if !a.is_zero() {
                found = Some((x, a));
                break;
            }
        }
    }
    let (x, a) = found.ok_or_else(|| Error::pre("no trace-zero element with invertible square"))?;
    // y in the pure part with xy + yx = 0
    let anti: Vec<Elem> = pure.iter().map(|y| elem_add(&alg.mul(&x, y), &alg.mul(y, &x))).collect();
    let m = Matrix::from_fn(p, 4, pure.len(), |r, c| anti[c][r].clone());
    let ys: Vec<Elem> = m
        .nullspace()
        .iter()
        .map(|c| {
            let mut v = alg.zero();
            for (ci, b) in c.iter().zip(&pure) {
                v = elem_add(&v, &elem_scale(b, ci));
            }
            v
        })
        .collect();
    for y in candidates(p, &ys) {
        if elem_is_zero(&y) {
            continue;
        }
        if let Some(b) = scalar_of(alg, &alg.mul(&y, &y)) {
            if b.is_zero() {
                continue;
            }
            let xy = alg.mul(&x, &y);
            let basis = Matrix::from_fn(p, 4, 4, |r, c| [alg.one(), &x, &y, &xy][c][r].clone());
            if basis.rank() == 4 {
                return Ok(QuatPresentation { quaternion: Quaternion::new(a, b)?, i: x, j: y });
            }
        }
    }
    Err(Error::pre("no anticommuting partner with invertible square"))
}

/// `iota(x) + x = Trd(x)` on every basis element of a four-dimensional central algebra.
pub fn is_canonical_involution(ia: &InvolutionAlgebra) -> bool {
    let alg = &ia.alg;
    (0..ia.dim()).all(|j| {
        let e = alg.basis(j);
        let lhs = elem_add(&ia.apply(&e), &e);
        lhs == elem_scale(alg.one(), &reduced_trace(alg, &e, 2))
    })
}

/// One simple factor of `Skew(A, sigma)` for a degree-4 orthogonal involution with trivial
/// discriminant; it is the pure part of one factor of the Clifford algebra.
#[derive(Clone, Debug)]
pub struct CliffordFactor {
    /// Basis of the factor inside `A`.
    pub basis: Vec<Elem>,
    /// Killing form on the factor.
    pub killing: QuadForm,
    /// Places where the Killing form is anisotropic, i.e. where this Clifford factor ramifies.
    pub ramification: BTreeSet<Place>,
}

/// The two quaternion factors `C+`, `C-` of the Clifford algebra of a degree-4 orthogonal involution.
#[derive(Clone, Debug)]
pub struct CliffordPair {
    /// `None` when the discriminant is not a square (the centroid is a field).
    pub factors: Option<[CliffordFactor; 2]>,
    pub discriminant: RatFunc,
}

impl CliffordPair {
    /// `Ram(C+) + Ram(C-)` in the Brauer group, which is the class of the algebra.
    pub fn algebra_ramification(&self) -> Option<BTreeSet<Place>> {
        self.factors.as_ref().map(|[a, b]| a.ramification.symmetric_difference(&b.ramification).cloned().collect())
    }

    /// The unordered pair of ramification sets, sorted.
    pub fn ramification_pair(&self) -> Option<[BTreeSet<Place>; 2]> {
        self.factors.as_ref().map(|[a, b]| [a.ramification.clone(), b.ramification.clone()])
    }

    /// Hyperbolic at `v` iff one Clifford factor splits there.
    pub fn hyperbolic_at(&self, v: &Place) -> Option<bool> {
        self.factors.as_ref().map(|[a, b]| !a.ramification.contains(v) || !b.ramification.contains(v))
    }
}

fn commutator(alg: &Algebra, x: &[RatFunc], y: &[RatFunc]) -> Elem {
    crate::algebra::elem_sub(&alg.mul(x, y), &alg.mul(y, x))
}

/// Splits the Lie algebra of skew elements through its centroid and reads off the Clifford factors.
pub fn clifford_pair(ia: &InvolutionAlgebra) -> Result<CliffordPair> {
    let p = ia.prime();
    let alg = &ia.alg;
    let skew = ia.skew();
    if alg.dim() != 16 || skew.len() != 6 {
        return Err(Error::pre("Clifford factors need a degree-4 algebra with orthogonal involution"));
    }
    let cm = crate::algebra::CoordMap::new(p, skew.iter().map(|v| sparse_from_dense(v)).collect(), alg.dim())?;
    let ad: Vec<Matrix> = skew
        .iter()
        .map(|x| {
            let cols: Vec<Elem> = skew.iter().map(|y| cm.coords_unchecked(&commutator(alg, x, y))).collect();
            Matrix::from_fn(p, 6, 6, |r, c| cols[c][r].clone())
        })
        .collect();
    // centroid: T with T ad_x = ad_x T
    let mut ech = Echelon::new(p, 36);
    for a in &ad {
        for i in 0..6 {
            for l in 0..6 {
                let mut row: Vec<(usize, RatFunc)> = (0..6).map(|j| (6 * i + j, a[(j, l)].clone())).collect();
                row.extend((0..6).map(|j| (6 * j + l, -&a[(i, j)])));
                let row = combine(row);
                if !row.is_empty() {
                    ech.insert(&row);
                }
            }
        }
    }
    let centroid: Vec<Matrix> = ech
        .nullspace()
        .iter()
        .map(|v| {
            let mut m = Matrix::zeros(p, 6, 6);
            for (k, x) in v {
                m[(k / 6, k % 6)] = x.clone();
            }
            m
        })
        .collect();
    if centroid.len() != 2 {
        return Err(Error::pre(format!("centroid of the skew Lie algebra has dimension {}", centroid.len())));
    }
    let id = Matrix::identity(p, 6);
    let t = centroid
        .iter()
        .find(|m| {
            let k = m.data().iter().position(|x| !x.is_zero());
            k.is_some_and(|k| *m != &id.scale(&m.data()[k]))
        })
        .or_else(|| centroid.iter().find(|m| !m.is_zero() && !m.is_identity()))
        .ok_or_else(|| Error::cert("no non-scalar centroid element"))?
        .clone();
    // T^2 = c1 T + c0
    let t2 = &t * &t;
    let sys = Matrix::from_fn(p, 36, 2, |r, c| if c == 0 { id.data()[r].clone() } else { t.data()[r].clone() });
    let c = sys.solve(t2.data()).ok_or_else(|| Error::cert("centroid element is not quadratic"))?;
    let (c0, c1) = (&c[0], &c[1]);
    let four = RatFunc::constant(4, p);
    let discriminant = &(c1 * c1) + &(&four * c0);
    let Some(s) = discriminant.sqrt() else {
        return Ok(CliffordPair { factors: None, discriminant });
    };
    let half = RatFunc::constant(2, p).inv();
    let roots = [&(c1 + &s) * &half, &(c1 - &s) * &half];
    let mut factors = Vec::new();
    for lam in &roots {
        let shifted = &t - &id.scale(lam);
        let coeffs = shifted.nullspace();
        if coeffs.len() != 3 {
            return Err(Error::cert("centroid eigenspace is not three-dimensional"));
        }
        let basis: Vec<Elem> = coeffs.iter().map(|c| crate::algebra::elem_combination(p, alg.dim(), c, &skew)).collect();
        let ads: Vec<Matrix> = coeffs
            .iter()
            .map(|c| {
                let mut m = Matrix::zeros(p, 6, 6);
                for (ci, a) in c.iter().zip(&ad) {
                    if !ci.is_zero() {
                        m = &m + &a.scale(ci);
                    }
                }
                m
            })
            .collect();
        let gram = Matrix::from_fn(p, 3, 3, |a, b| (&ads[a] * &ads[b]).trace());
        let killing = QuadForm::new(gram)?;
        let data = killing.local_data().map_err(|_| Error::cert("Killing form of a Clifford factor is degenerate"))?;
        let ramification = data.bad_places().iter().filter(|v| !data.is_isotropic_at(v)).cloned().collect();
        factors.push(CliffordFactor { basis, killing, ramification });
    }
    factors.sort_by(|a, b| a.ramification.cmp(&b.ramification));
    let [a, b]: [CliffordFactor; 2] = factors.try_into().map_err(|_| Error::cert("expected two Clifford factors"))?;
    Ok(CliffordPair { factors: Some([a, b]), discriminant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_place;

    fn h(a: &str, b: &str) -> Quaternion {
        Quaternion::parse(a, b, 3).unwrap()
    }

    fn names(s: &BTreeSet<Place>) -> Vec<String> {
        s.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn norm_identity() {
        let q = h("-1", "t");
        let x = q.elem([0, 1, 1, 0]);
        assert_eq!(q.nrd(&x), crate::funcfield::parse_ratfunc("1-t", 3).unwrap());
        assert_eq!(q.conj(&q.basis(1)), q.elem([0, -1, 0, 0]));
        let y = [RatFunc::t(3), RatFunc::one(3), RatFunc::constant(2, 3), RatFunc::t(3)];
        let n = q.nrd(&y);
        let expect = &(&(&(&y[0] * &y[0]) - &(&q.a * &(&y[1] * &y[1]))) - &(&q.b * &(&y[2] * &y[2])))
            + &(&(&q.a * &q.b) * &(&y[3] * &y[3]));
        assert_eq!(n, expect);
    }

    #[test]
    fn ramification_examples() {
        assert!(h("1", "t").ramification_set().unwrap().is_empty());
        assert_eq!(names(&h("-1", "t").ramification_set().unwrap()), vec!["t", "inf"]);
        assert_eq!(names(&h("-1", "(t-1)*(t-2)").ramification_set().unwrap()), vec!["t+1", "t+2"]);
        assert!(h("t", "-t").is_split().unwrap());
        assert!(!h("-1", "t").is_split().unwrap());
        assert!(!h("-1", "t").norm_form().is_isotropic().unwrap());
    }

    #[test]
    fn sandwich_examples() {
        let q = h("-1", "t");
        let [a1, a2, _] = q.a_matrices();
        assert!(a1.is_identity());
        assert_eq!(&a2 * &a2, Matrix::identity(3, 4).scale(&RatFunc::constant(-1, 3)));
        let iso = SandwichIso::new(&q).unwrap();
        let i = q.basis(1);
        let one = q.basis(0);
        assert_eq!(&iso.image(&i, &one) * &iso.image(&one, &i), iso.image(&i, &i));
    }

    #[test]
    fn tau_fixes_i_and_j() {
        let q = h("-1", "t");
        assert_eq!(q.tau(&q.basis(1)), q.basis(1));
        assert_eq!(q.tau(&q.basis(2)), q.basis(2));
        assert_eq!(q.tau(&q.basis(3)), q.elem([0, 0, 0, -1]));
        let k = involution_kind(&q.with_tau()).unwrap();
        assert_eq!((k.kind, k.sym_dim), (InvolutionKind::Orthogonal, 3));
        let k = involution_kind(&q.with_canonical(false)).unwrap();
        assert_eq!((k.kind, k.sym_dim), (InvolutionKind::Symplectic, 1));
    }

    #[test]
    fn rho_and_alpha() {
        let q = h("-1", "t");
        let rho = rho_involution(&q).unwrap();
        let k = involution_kind(&rho).unwrap();
        assert_eq!((k.kind, k.sym_dim), (InvolutionKind::Symplectic, 6));
        for a in q.a_matrices() {
            let x = a.into_data();
            assert_eq!(rho.apply(&x), x);
        }
        let alpha = solve_alpha(&rho).unwrap();
        assert!(alpha.is_skew());
    }

    #[test]
    fn alpha_recovers_standard_symplectic() {
        let a0 = Matrix::from_ints(3, &[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        let inv = adjoint_involution(&a0).unwrap();
        assert_eq!(solve_alpha(&inv).unwrap(), a0);
        let t = adjoint_involution(&Matrix::identity(3, 4)).unwrap();
        assert!(solve_alpha(&t).is_err());
        let k = involution_kind(&t).unwrap();
        assert_eq!((k.kind, k.sym_dim), (InvolutionKind::Orthogonal, 10));
    }

    #[test]
    fn tensor_class() {
        let c = tensor_m2q(&h("-1", "t"), &h("-1", "(t-1)*(t-2)")).unwrap();
        assert_eq!(names(&c.ram_q), vec!["t", "t+1", "t+2", "inf"]);
        assert!(c.q_division);
        let same = tensor_m2q(&h("-1", "t"), &h("-1", "t")).unwrap();
        assert!(same.ram_q.is_empty() && !same.q_division);
        let split = tensor_m2q(&h("1", "t"), &h("-1", "t")).unwrap();
        assert_eq!(split.ram_q, split.ram2);
        assert!(c.ram_q.contains(&parse_place("inf", 3).unwrap()));
    }

    #[test]
    fn clifford_of_tensor_of_canonical_involutions() {
        let (h1, h2) = (h("-1", "t"), h("-1", "(t-1)*(t-2)"));
        let ia = tensor_involution_algebras(&h1.with_canonical(true), &h2.with_canonical(true));
        let k = involution_kind(&ia).unwrap();
        assert_eq!((k.kind, k.sym_dim), (InvolutionKind::Orthogonal, 10));
        let pair = clifford_pair(&ia).unwrap();
        let [a, b] = pair.ramification_pair().unwrap();
        assert_eq!((names(&a), names(&b)), (vec!["t".to_string(), "inf".into()], vec!["t+1".to_string(), "t+2".into()]));
        assert_eq!(pair.algebra_ramification().unwrap().len(), 4);
        for v in a.iter().chain(&b) {
            assert_eq!(pair.hyperbolic_at(v), Some(true));
        }
    }

    #[test]
    fn clifford_of_split_orthogonal() {
        // transpose on M_4: disc(I_4) = 1, both factors split
        let ia = adjoint_involution(&Matrix::identity(3, 4)).unwrap();
        let pair = clifford_pair(&ia).unwrap();
        assert!(pair.algebra_ramification().unwrap().is_empty());
        // <1,1,1,t> has nonsquare discriminant
        let d = Matrix::diagonal(3, &[RatFunc::one(3), RatFunc::one(3), RatFunc::one(3), RatFunc::t(3)]);
        assert!(clifford_pair(&adjoint_involution(&d).unwrap()).unwrap().factors.is_none());
    }

    #[test]
    fn extraction_and_canonical() {
        let q = h("-1", "t");
        let op = q.with_canonical(true);
        assert!(is_canonical_involution(&op));
        let pres = extract_quaternion(&op.alg).unwrap();
        assert_eq!(pres.quaternion.ramification_set().unwrap(), q.ramification_set().unwrap());
        assert!(!is_canonical_involution(&q.with_tau()));
    }
}
