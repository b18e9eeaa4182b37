use std::collections::HashMap;

use super::dense::Matrix;
use crate::funcfield::RatFunc;

/// Sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, RatFunc)>;

pub fn sparse_from_dense(v: &[RatFunc]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseVec, n: usize, p: u32) -> Vec<RatFunc> {
    let mut out = vec![RatFunc::zero(p); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + c * b`.
pub fn axpy(a: &SparseVec, c: &RatFunc, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let bj = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ai < bj {
            out.push(a[i].clone());
            i += 1;
        } else if bj < ai {
            out.push((bj, c * &b[j].1));
            j += 1;
        } else {
            let x = &a[i].1 + &(c * &b[j].1);
            if !x.is_zero() {
                out.push((ai, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(a: &SparseVec, c: &RatFunc) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Sum of `c_k * v_k`.
pub fn sparse_combination<'a>(terms: impl IntoIterator<Item = (&'a RatFunc, &'a SparseVec)>) -> SparseVec {
    let mut acc: HashMap<usize, RatFunc> = HashMap::new();
    for (c, v) in terms {
        if c.is_zero() {
            continue;
        }
        for (i, x) in v {
            let y = c * x;
            match acc.get_mut(i) {
                Some(e) => *e = &*e + &y,
                None => {
                    acc.insert(*i, y);
                }
            }
        }
    }
    let mut out: SparseVec = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Row echelon basis of a growing subspace of F_p(t)^n.
///
/// Every stored row has leading entry 1 at its pivot column and is reduced
/// against all pivots that existed when it was inserted.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(p: u32, ncols: usize) -> Self {
        Echelon { p, ncols, rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut k = 0;
        while k < v.len() {
            let col = v[k].0;
            match self.pivot_row.get(&col) {
                Some(&r) => {
                    let c = -&v[k].1;
                    v = axpy(&v, &c, &self.rows[r]);
                }
                None => k += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        if self.is_full() {
            return false;
        }
        let r = self.reduce(v);
        let Some((col, lead)) = r.first().cloned() else {
            return false;
        };
        let row = sparse_scale(&r, &lead.inv());
        self.pivot_row.insert(col, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn insert_dense(&mut self, v: &[RatFunc]) -> bool {
        self.insert(&sparse_from_dense(v))
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut piv: Vec<usize> = self.pivot_row.keys().copied().collect();
        piv.sort_unstable();
        piv
    }

    /// The canonical reduced row echelon basis, sorted by pivot column.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let pivots = self.pivots();
        let mut done: HashMap<usize, SparseVec> = HashMap::new();
        // higher pivots first, so each row is reduced against finished rows only
        for &c in pivots.iter().rev() {
            let mut row = self.rows[self.pivot_row[&c]].clone();
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0;
                match done.get(&col) {
                    Some(other) => {
                        let f = -&row[k].1;
                        row = axpy(&row, &f, other);
                    }
                    None => k += 1,
                }
            }
            done.insert(c, row);
        }
        pivots.iter().map(|c| done.remove(c).unwrap()).collect()
    }

    /// Basis of the orthogonal solution space `{x : r . x = 0 for all rows r}`,
    /// one vector per non-pivot column with a 1 there and 0 at the other free columns.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let rref = self.rref_rows();
        let pivots = self.pivots();
        let mut by_free: HashMap<usize, Vec<(usize, RatFunc)>> = HashMap::new();
        for (row, &pc) in rref.iter().zip(&pivots) {
            for (c, x) in row.iter().skip(1) {
                by_free.entry(*c).or_default().push((pc, -x));
            }
        }
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|f| {
                let mut v = by_free.remove(&f).unwrap_or_default();
                v.push((f, RatFunc::one(self.p)));
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }
}

/// Row-sparse matrix, for representations too large to hold densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn from_dense(m: &Matrix) -> Self {
        SparseMatrix {
            p: m.prime(),
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows()).map(|i| sparse_from_dense(m.row(i))).collect(),
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                m[(i, *j)] = x.clone();
            }
        }
        m
    }

    /// From sparse rows; entries within a row may come in any order but must not repeat.
    pub fn from_rows(p: u32, cols: usize, mut data: Vec<SparseVec>) -> Self {
        for row in &mut data {
            row.sort_by_key(|e| e.0);
            row.retain(|(_, x)| !x.is_zero());
        }
        SparseMatrix { p, rows: data.len(), cols, data }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                data[*j].push((i, x.clone()));
            }
        }
        SparseMatrix { p: self.p, rows: self.cols, cols: self.rows, data }
    }

    pub fn trace(&self) -> RatFunc {
        let mut acc = RatFunc::zero(self.p);
        for (i, row) in self.data.iter().enumerate() {
            if let Ok(k) = row.binary_search_by_key(&i, |e| e.0) {
                acc = &acc + &row[k].1;
            }
        }
        acc
    }

    pub fn identity(p: u32, n: usize) -> Self {
        SparseMatrix { p, rows: n, cols: n, data: (0..n).map(|i| vec![(i, RatFunc::one(p))]).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for i in 0..self.rows {
            for k in 0..other.rows {
                let mut row = Vec::new();
                for (j, a) in &self.data[i] {
                    for (l, b) in &other.data[k] {
                        row.push((j * other.cols + l, a * b));
                    }
                }
                data.push(row);
            }
        }
        SparseMatrix { p: self.p, rows: self.rows * other.rows, cols: self.cols * other.cols, data }
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let data = self
            .data
            .iter()
            .map(|row| sparse_combination(row.iter().map(|(k, a)| (a, &other.data[*k]))))
            .collect();
        SparseMatrix { p: self.p, rows: self.rows, cols: other.cols, data }
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        let minus = -RatFunc::one(self.p);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &minus, b)).collect();
        SparseMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut dense: HashMap<usize, &RatFunc> = HashMap::new();
        for (i, x) in v {
            dense.insert(*i, x);
        }
        let mut out = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = RatFunc::zero(self.p);
            for (j, a) in row {
                if let Some(x) = dense.get(j) {
                    acc = &acc + &(a * *x);
                }
            }
            if !acc.is_zero() {
                out.push((i, acc));
            }
        }
        out
    }

    /// Linear combination `sum c_k M_k` of equally shaped matrices.
    pub fn combination(p: u32, rows: usize, cols: usize, terms: &[(&RatFunc, &SparseMatrix)]) -> SparseMatrix {
        let data = (0..rows).map(|i| sparse_combination(terms.iter().map(|(c, m)| (*c, &m.data[i])))).collect();
        SparseMatrix { p, rows, cols, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(c: i64) -> RatFunc {
        RatFunc::constant(c, 3)
    }

    #[test]
    fn echelon_rank_and_nullspace() {
        let mut e = Echelon::new(3, 4);
        assert!(e.insert(&vec![(0, rf(1)), (1, rf(2))]));
        assert!(e.insert(&vec![(1, rf(1)), (3, RatFunc::t(3))]));
        assert!(!e.insert(&vec![(0, rf(1)), (1, rf(1)), (3, -RatFunc::t(3))]));
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in e.rref_rows() {
                let mut dot = RatFunc::zero(3);
                for (i, x) in &r {
                    if let Some((_, y)) = v.iter().find(|(j, _)| j == i) {
                        dot = &dot + &(x * y);
                    }
                }
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn sparse_matches_dense() {
        let a = Matrix::from_ints(3, &[&[1, 0, 2], &[0, 1, 1], &[1, 1, 0]]);
        let b = Matrix::from_ints(3, &[&[0, 1], &[2, 0], &[1, 1]]);
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        assert_eq!(sa.mul(&sb).to_dense(), &a * &b);
        assert_eq!(sa.kron(&sb).to_dense(), a.kron(&b));
    }
}
