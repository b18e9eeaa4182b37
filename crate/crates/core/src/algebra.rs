//! Finite-dimensional algebras over F_p(t) by structure constants, with involutions.

use crate::error::{Error, Result};
use crate::funcfield::RatFunc;
use crate::linalg::{sparse_combination, sparse_from_dense, sparse_to_dense, Echelon, Matrix, SparseMatrix, SparseVec};

/// Coordinates on a fixed basis.
pub type Elem = Vec<RatFunc>;

pub fn zero_elem(p: u32, n: usize) -> Elem {
    vec![RatFunc::zero(p); n]
}

pub fn unit_elem(p: u32, n: usize, i: usize) -> Elem {
    let mut v = zero_elem(p, n);
    v[i] = RatFunc::one(p);
    v
}

pub fn elem_add(a: &[RatFunc], b: &[RatFunc]) -> Elem {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn elem_sub(a: &[RatFunc], b: &[RatFunc]) -> Elem {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn elem_scale(a: &[RatFunc], c: &RatFunc) -> Elem {
    a.iter().map(|x| x * c).collect()
}

pub fn elem_is_zero(a: &[RatFunc]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Sum of `c_k * v_k`.
pub fn elem_combination(p: u32, n: usize, coeffs: &[RatFunc], vecs: &[Elem]) -> Elem {
    let mut out = zero_elem(p, n);
    for (c, v) in coeffs.iter().zip(vecs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = &*o + &(c * x);
            }
        }
    }
    out
}

/// Maps matrices in a fixed span to coordinates on its basis.
#[derive(Clone, Debug)]
pub struct CoordMap {
    /// Flattened positions whose values determine the coordinates.
    positions: Vec<usize>,
    /// Inverse of the basis restricted to `positions`; `None` when that restriction is the identity.
    solve: Option<SparseMatrix>,
    basis_flat: Vec<SparseVec>,
    p: u32,
}

impl CoordMap {
    pub fn new(p: u32, basis_flat: Vec<SparseVec>, len: usize) -> Result<CoordMap> {
        let d = basis_flat.len();
        let mut ech = Echelon::new(p, len);
        for v in &basis_flat {
            if !ech.insert(v) {
                return Err(Error::pre("basis is linearly dependent"));
            }
        }
        let positions = ech.pivots();
        let s = Matrix::from_fn(p, d, d, |k, l| {
            basis_flat[l].iter().find(|(i, _)| *i == positions[k]).map(|(_, x)| x.clone()).unwrap_or_else(|| RatFunc::zero(p))
        });
        let solve = if s.is_identity() {
            None
        } else {
            Some(SparseMatrix::from_dense(&s.inverse().ok_or_else(|| Error::cert("coordinate system"))?))
        };
        Ok(CoordMap { positions, solve, basis_flat, p })
    }

    /// Coordinates on the Kronecker products `X_a (x) Y_b` (index `a dim2 + b`) of two matrix spans
    /// with ambient sizes `n1`, `n2`.
    pub fn tensor(a: &CoordMap, b: &CoordMap, n1: usize, n2: usize, basis_flat: Vec<SparseVec>) -> CoordMap {
        let n = n1 * n2;
        let mut positions = Vec::with_capacity(a.positions.len() * b.positions.len());
        for &pa in &a.positions {
            for &pb in &b.positions {
                let (i1, j1) = (pa / n1, pa % n1);
                let (i2, j2) = (pb / n2, pb % n2);
                positions.push((i1 * n2 + i2) * n + j1 * n2 + j2);
            }
        }
        let id = |c: &CoordMap| SparseMatrix::identity(c.p, c.basis_flat.len());
        let solve = match (&a.solve, &b.solve) {
            (None, None) => None,
            (sa, sb) => Some(sa.clone().unwrap_or_else(|| id(a)).kron(&sb.clone().unwrap_or_else(|| id(b)))),
        };
        CoordMap { positions, solve, basis_flat, p: a.p }
    }

    pub fn dim(&self) -> usize {
        self.basis_flat.len()
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn coords_unchecked(&self, v: &[RatFunc]) -> Elem {
        let raw: Elem = self.positions.iter().map(|&i| v[i].clone()).collect();
        match &self.solve {
            None => raw,
            Some(s) => sparse_to_dense(&s.mul_vec(&sparse_from_dense(&raw)), raw.len(), self.p),
        }
    }

    /// Coordinates of `v`, or `None` if it is outside the span.
    pub fn coords(&self, v: &[RatFunc]) -> Option<Elem> {
        let c = self.coords_unchecked(v);
        let back = sparse_combination(c.iter().zip(&self.basis_flat));
        if back == sparse_from_dense(v) {
            Some(c)
        } else {
            None
        }
    }

    pub fn coords_sparse(&self, v: &SparseVec, len: usize) -> Option<Elem> {
        self.coords(&sparse_to_dense(v, len, self.p))
    }

    /// Coordinates of a sparse vector, or `None` if it is outside the span.
    pub fn coords_of_sparse(&self, v: &SparseVec) -> Option<Elem> {
        let raw: Elem = self
            .positions
            .iter()
            .map(|&i| v.binary_search_by_key(&i, |e| e.0).map_or_else(|_| RatFunc::zero(self.p), |k| v[k].1.clone()))
            .collect();
        let c = match &self.solve {
            None => raw,
            Some(s) => sparse_to_dense(&s.mul_vec(&sparse_from_dense(&raw)), raw.len(), self.p),
        };
        (sparse_combination(c.iter().zip(&self.basis_flat)) == *v).then_some(c)
    }
}

/// Structure constants plus a faithful matrix representation of the basis.
#[derive(Clone, Debug)]
pub struct Algebra {
    p: u32,
    dim: usize,
    table: Vec<Vec<SparseVec>>,
    one: Elem,
    rep: Vec<SparseMatrix>,
}

impl Algebra {
    /// Algebra with the given products `table[i][j] = e_i e_j`, represented regularly.
    pub fn from_table(p: u32, table: Vec<Vec<SparseVec>>, one: Elem) -> Algebra {
        let dim = one.len();
        let mut alg = Algebra { p, dim, table, one, rep: Vec::new() };
        alg.rep = (0..dim).map(|i| alg.regular_matrix(i)).collect();
        alg
    }

    /// Replaces the representation used for traces and nilpotency tests.
    pub fn with_rep(mut self, rep: Vec<SparseMatrix>) -> Algebra {
        assert_eq!(rep.len(), self.dim);
        self.rep = rep;
        self
    }

    /// The subalgebra of `M_n` spanned by `basis`; closure under products is verified.
    pub fn from_matrices(p: u32, basis: &[Matrix]) -> Result<(Algebra, CoordMap)> {
        let sparse: Vec<SparseMatrix> = basis.iter().map(SparseMatrix::from_dense).collect();
        Algebra::from_sparse_matrices(p, &sparse)
    }

    pub fn from_sparse_matrices(p: u32, basis: &[SparseMatrix]) -> Result<(Algebra, CoordMap)> {
        let n = basis.first().map_or(0, |b| b.rows());
        let flat: Vec<SparseVec> = basis.iter().map(flatten).collect();
        let cm = CoordMap::new(p, flat, n * n)?;
        let mut table = Vec::with_capacity(basis.len());
        for a in basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in basis {
                let prod = flatten(&a.mul(b));
                let c = cm.coords_of_sparse(&prod).ok_or_else(|| Error::cert("span is not closed under multiplication"))?;
                row.push(sparse_from_dense(&c));
            }
            table.push(row);
        }
        let id = flatten(&SparseMatrix::identity(p, n));
        let one = cm.coords_of_sparse(&id).ok_or_else(|| Error::cert("span does not contain the identity"))?;
        Ok((Algebra { p, dim: basis.len(), table, one, rep: basis.to_vec() }, cm))
    }

    /// Algebra with explicit products, unit and faithful representation.
    pub fn from_parts(p: u32, table: Vec<Vec<SparseVec>>, one: Elem, rep: Vec<SparseMatrix>) -> Algebra {
        Algebra { p, dim: one.len(), table, one, rep }
    }

    fn regular_matrix(&self, i: usize) -> SparseMatrix {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.dim];
        for j in 0..self.dim {
            for (r, x) in &self.table[i][j] {
                rows[*r].push((j, x.clone()));
            }
        }
        SparseMatrix::from_rows(self.p, self.dim, rows)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> &Elem {
        &self.one
    }

    pub fn zero(&self) -> Elem {
        zero_elem(self.p, self.dim)
    }

    pub fn basis(&self, i: usize) -> Elem {
        unit_elem(self.p, self.dim, i)
    }

    pub fn table(&self) -> &Vec<Vec<SparseVec>> {
        &self.table
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn rep(&self) -> &[SparseMatrix] {
        &self.rep
    }

    pub fn rep_dim(&self) -> usize {
        self.rep.first().map_or(0, |m| m.rows())
    }

    pub fn mul(&self, x: &[RatFunc], y: &[RatFunc]) -> Elem {
        let xs = sparse_from_dense(x);
        let ys = sparse_from_dense(y);
        let mut terms: Vec<(RatFunc, &SparseVec)> = Vec::with_capacity(xs.len() * ys.len());
        for (i, a) in &xs {
            for (j, b) in &ys {
                terms.push((a * b, &self.table[*i][*j]));
            }
        }
        sparse_to_dense(&sparse_combination(terms.iter().map(|(c, v)| (c, *v))), self.dim, self.p)
    }

    /// Matrix of `z -> x z`.
    pub fn left_matrix(&self, x: &[RatFunc]) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(x, &self.basis(j));
            for (r, v) in col.into_iter().enumerate() {
                m[(r, j)] = v;
            }
        }
        m
    }

    /// Matrix of `z -> z x`.
    pub fn right_matrix(&self, x: &[RatFunc]) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(&self.basis(j), x);
            for (r, v) in col.into_iter().enumerate() {
                m[(r, j)] = v;
            }
        }
        m
    }

    pub fn rep_of(&self, x: &[RatFunc]) -> SparseMatrix {
        let n = self.rep_dim();
        let terms: Vec<(&RatFunc, &SparseMatrix)> = x.iter().zip(&self.rep).filter(|(c, _)| !c.is_zero()).collect();
        SparseMatrix::combination(self.p, n, n, &terms)
    }

    pub fn inverse(&self, x: &[RatFunc]) -> Option<Elem> {
        let w = self.left_matrix(x).solve(&self.one)?;
        if self.mul(&w, x) == self.one {
            Some(w)
        } else {
            None
        }
    }

    pub fn pow(&self, x: &[RatFunc], e: u32) -> Elem {
        let mut acc = self.one.clone();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Elem> {
        let mut ech = Echelon::new(self.p, self.dim);
        // rows of (z e_j - e_j z) as linear forms in z
        for j in 0..self.dim {
            let mut rows: Vec<SparseVec> = vec![Vec::new(); self.dim];
            for i in 0..self.dim {
                for (r, x) in &self.table[i][j] {
                    rows[*r].push((i, x.clone()));
                }
                for (r, x) in &self.table[j][i] {
                    rows[*r].push((i, -x));
                }
            }
            for row in rows {
                let v = normalize_sparse(row);
                if !v.is_empty() {
                    ech.insert(&v);
                }
            }
        }
        ech.nullspace().iter().map(|v| sparse_to_dense(v, self.dim, self.p)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Checks `(e_i e_j) e_k = e_i (e_j e_k)` on all triples, or on a strided sample for large algebras.
    pub fn check_associative(&self, max_triples: usize) -> bool {
        let d = self.dim;
        let total = d * d * d;
        let step = (total / max_triples.max(1)).max(1);
        let mut idx = 0;
        while idx < total {
            let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
            let left = self.mul(&sparse_to_dense(&self.table[i][j], d, self.p), &self.basis(k));
            let right = self.mul(&self.basis(i), &sparse_to_dense(&self.table[j][k], d, self.p));
            if left != right {
                return false;
            }
            idx += step;
        }
        true
    }

    /// The subalgebra spanned by `basis` (coordinates in this algebra), with its own unit.
    pub fn subalgebra(&self, basis: &[Elem], unit: &[RatFunc]) -> Result<(Algebra, CoordMap)> {
        let flat: Vec<SparseVec> = basis.iter().map(|b| sparse_from_dense(b)).collect();
        let cm = CoordMap::new(self.p, flat, self.dim)?;
        let mut table = Vec::new();
        for a in basis {
            let mut row = Vec::new();
            for b in basis {
                let c = cm.coords(&self.mul(a, b)).ok_or_else(|| Error::cert("subspace is not a subalgebra"))?;
                row.push(sparse_from_dense(&c));
            }
            table.push(row);
        }
        let one = cm.coords(unit).ok_or_else(|| Error::cert("unit outside subalgebra"))?;
        Ok((Algebra::from_table(self.p, table, one), cm))
    }

    /// Minimal polynomial of `x`, as coefficients `c_0..c_{d-1}` of `x^d = sum c_k x^k`.
    pub fn min_poly(&self, x: &[RatFunc]) -> Vec<RatFunc> {
        let mut powers = vec![self.one.clone()];
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            let m = Matrix::from_fn(self.p, self.dim, powers.len(), |r, c| powers[c][r].clone());
            if let Some(sol) = m.solve(&next) {
                return sol;
            }
            powers.push(next);
        }
    }
}

/// Row-major flattening of a sparse matrix.
pub fn flatten(m: &SparseMatrix) -> SparseVec {
    let c = m.cols();
    (0..m.rows()).flat_map(|i| m.row(i).iter().map(move |(j, x)| (i * c + j, x.clone()))).collect()
}

fn normalize_sparse(mut row: SparseVec) -> SparseVec {
    row.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(row.len());
    for (i, x) in row {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// An algebra with a k-linear involution, given by its matrix on the basis.
#[derive(Clone, Debug)]
pub struct InvolutionAlgebra {
    pub alg: Algebra,
    /// Column `j` holds the coordinates of the image of `e_j`.
    pub inv: SparseMatrix,
}

impl InvolutionAlgebra {
    pub fn new(alg: Algebra, inv: SparseMatrix) -> InvolutionAlgebra {
        InvolutionAlgebra { alg, inv }
    }

    /// Builds the involution matrix from images of basis elements.
    pub fn from_images(alg: Algebra, images: &[Elem]) -> InvolutionAlgebra {
        let p = alg.prime();
        let d = alg.dim();
        let m = Matrix::from_fn(p, d, d, |r, c| images[c][r].clone());
        InvolutionAlgebra { alg, inv: SparseMatrix::from_dense(&m) }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn prime(&self) -> u32 {
        self.alg.prime()
    }

    pub fn apply(&self, x: &[RatFunc]) -> Elem {
        sparse_to_dense(&self.inv.mul_vec(&sparse_from_dense(x)), self.dim(), self.prime())
    }

    /// `iota^2 = id` and `iota(e_i e_j) = iota(e_j) iota(e_i)` on basis pairs (strided for large algebras).
    pub fn verify(&self, max_pairs: usize) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            let e = self.alg.basis(i);
            if self.apply(&self.apply(&e)) != e {
                return Err(Error::cert(format!("involution does not square to the identity on basis element {i}")));
            }
        }
        let total = d * d;
        let step = (total / max_pairs.max(1)).max(1);
        let mut idx = 0;
        while idx < total {
            let (i, j) = (idx / d, idx % d);
            let prod = sparse_to_dense(self.alg.product(i, j), d, self.prime());
            let lhs = self.apply(&prod);
            let rhs = self.alg.mul(&self.apply(&self.alg.basis(j)), &self.apply(&self.alg.basis(i)));
            if lhs != rhs {
                return Err(Error::cert(format!("involution is not anti-multiplicative on ({i}, {j})")));
            }
            idx += step;
        }
        Ok(())
    }

    /// Basis of `{x : iota(x) = sign * x}`.
    pub fn eigenspace(&self, sign: i64) -> Vec<Elem> {
        let p = self.prime();
        let d = self.dim();
        let mut m = self.inv.to_dense();
        let s = RatFunc::constant(sign, p);
        for i in 0..d {
            let x = &m[(i, i)] - &s;
            m[(i, i)] = x;
        }
        m.nullspace()
    }

    pub fn symmetric(&self) -> Vec<Elem> {
        self.eigenspace(1)
    }

    pub fn skew(&self) -> Vec<Elem> {
        self.eigenspace(-1)
    }

    /// The involution `x -> u^-1 iota(x) u` for symmetric invertible `u`.
    pub fn twisted(&self, u: &[RatFunc]) -> Result<InvolutionAlgebra> {
        let uinv = self.alg.inverse(u).ok_or_else(|| Error::pre("element is not invertible"))?;
        let images: Vec<Elem> =
            (0..self.dim()).map(|j| self.alg.mul(&self.alg.mul(&uinv, &self.apply(&self.alg.basis(j))), u)).collect();
        Ok(InvolutionAlgebra::from_images(self.alg.clone(), &images))
    }
}

/// `A / I` for a two-sided ideal `I`, on the basis of coordinates not pivotal for `I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub alg: Algebra,
    /// Original coordinates forming the quotient basis.
    pub complement: Vec<usize>,
    ideal_rows: Vec<SparseVec>,
    ideal_pivots: Vec<usize>,
    dim: usize,
    p: u32,
}

impl Quotient {
    pub fn new(parent: &Algebra, ideal: &[Elem]) -> Result<Quotient> {
        let p = parent.prime();
        let d = parent.dim();
        let mut ech = Echelon::new(p, d);
        for v in ideal {
            ech.insert_dense(v);
        }
        let ideal_rows = ech.rref_rows();
        let ideal_pivots = ech.pivots();
        let mut is_piv = vec![false; d];
        for &c in &ideal_pivots {
            is_piv[c] = true;
        }
        let complement: Vec<usize> = (0..d).filter(|&c| !is_piv[c]).collect();
        let mut q = Quotient { alg: Algebra::from_table(p, Vec::new(), Vec::new()), complement, ideal_rows, ideal_pivots, dim: d, p };
        let table: Vec<Vec<SparseVec>> = q
            .complement
            .iter()
            .map(|&a| q.complement.iter().map(|&b| sparse_from_dense(&q.project_sparse(parent.product(a, b)))).collect())
            .collect();
        let one = q.project(parent.one());
        q.alg = Algebra::from_table(p, table, one);
        Ok(q)
    }

    /// Whether `x` lies in the ideal.
    pub fn in_ideal(&self, x: &[RatFunc]) -> bool {
        elem_is_zero(&self.reduce(x))
    }

    /// `x` with all ideal pivots eliminated (a canonical representative of its class).
    pub fn reduce(&self, x: &[RatFunc]) -> Elem {
        let mut v = x.to_vec();
        for (row, &c) in self.ideal_rows.iter().zip(&self.ideal_pivots) {
            if v[c].is_zero() {
                continue;
            }
            let f = v[c].clone();
            for (i, y) in row {
                v[*i] = &v[*i] - &(&f * y);
            }
        }
        v
    }

    pub fn project(&self, x: &[RatFunc]) -> Elem {
        let r = self.reduce(x);
        self.complement.iter().map(|&c| r[c].clone()).collect()
    }

    fn project_sparse(&self, x: &SparseVec) -> Elem {
        self.project(&sparse_to_dense(x, self.dim, self.p))
    }

    /// The representative supported on the complement coordinates.
    pub fn lift(&self, xbar: &[RatFunc]) -> Elem {
        let mut v = zero_elem(self.p, self.dim);
        for (c, x) in self.complement.iter().zip(xbar) {
            v[*c] = x.clone();
        }
        v
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal_rows.len()
    }

    /// Reduced row echelon basis of the ideal.
    pub fn ideal_basis(&self) -> Vec<Elem> {
        self.ideal_rows.iter().map(|r| sparse_to_dense(r, self.dim, self.p)).collect()
    }

    /// The induced involution, after checking that the ideal is stable.
    pub fn induced_involution(&self, parent: &InvolutionAlgebra) -> Result<InvolutionAlgebra> {
        for row in &self.ideal_rows {
            let x = sparse_to_dense(row, self.dim, self.p);
            if !self.in_ideal(&parent.apply(&x)) {
                return Err(Error::pre("the involution does not preserve the ideal"));
            }
        }
        let images: Vec<Elem> = self.complement.iter().map(|&c| self.project(&parent.apply(&parent.alg.basis(c)))).collect();
        Ok(InvolutionAlgebra::from_images(self.alg.clone(), &images))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// k[x]/(x^2) with basis 1, x.
    fn dual_numbers() -> Algebra {
        let p = 3;
        let one = |i: usize| vec![(i, RatFunc::one(p))];
        let table = vec![vec![one(0), one(1)], vec![one(1), Vec::new()]];
        Algebra::from_table(p, table, unit_elem(p, 2, 0))
    }

    #[test]
    fn matrix_algebra_roundtrip() {
        let p = 3;
        let units: Vec<Matrix> = (0..4)
            .map(|k| {
                let mut m = Matrix::zeros(p, 2, 2);
                m[(k / 2, k % 2)] = RatFunc::one(p);
                m
            })
            .collect();
        let (alg, _) = Algebra::from_matrices(p, &units).unwrap();
        assert!(alg.check_associative(1000));
        assert_eq!(alg.center().len(), 1);
        let transpose: Vec<Elem> = (0..4).map(|k| unit_elem(p, 4, (k % 2) * 2 + k / 2)).collect();
        let ia = InvolutionAlgebra::from_images(alg, &transpose);
        ia.verify(100).unwrap();
        assert_eq!(ia.symmetric().len(), 3);
        assert_eq!(ia.skew().len(), 1);
    }

    #[test]
    fn quotient_by_nilpotent() {
        let a = dual_numbers();
        assert!(a.is_commutative());
        let q = Quotient::new(&a, &[a.basis(1)]).unwrap();
        assert_eq!(q.alg.dim(), 1);
        assert_eq!(q.alg.one(), &vec![RatFunc::one(3)]);
        assert_eq!(q.ideal_dim(), 1);
    }

    #[test]
    fn inverse_and_min_poly() {
        let a = dual_numbers();
        let x = vec![RatFunc::one(3), RatFunc::t(3)];
        let inv = a.inverse(&x).unwrap();
        assert_eq!(a.mul(&x, &inv), *a.one());
        assert!(a.inverse(&a.basis(1)).is_none());
        // (1 + t x)^2 = 2(1 + t x) - 1
        let mp = a.min_poly(&x);
        assert_eq!(mp, vec![RatFunc::constant(-1, 3), RatFunc::constant(2, 3)]);
    }
}
