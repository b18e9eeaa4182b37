use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::funcfield::RatFunc;

/// Dense matrix over F_p(t), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

fn weight(a: &RatFunc) -> usize {
    a.num().coeffs().len() + a.den().coeffs().len()
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![RatFunc::zero(p); rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = RatFunc::one(p);
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { p, rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(p: u32, rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { p, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_flat(p: u32, rows: usize, cols: usize, data: Vec<RatFunc>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { p, rows, cols, data }
    }

    /// Entries given as small integers.
    pub fn from_ints(p: u32, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(p, rows.iter().map(|r| r.iter().map(|&c| RatFunc::constant(c, p)).collect()).collect())
    }

    pub fn diagonal(p: u32, entries: &[RatFunc]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(p, n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// `[[a, b], [c, d]]` from equally sized square blocks.
    pub fn block2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let n = a.rows;
        Matrix::from_fn(a.p, 2 * n, 2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(i % n, j % n)].clone()
        })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[RatFunc] {
        &self.data
    }

    pub fn into_data(self) -> Vec<RatFunc> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// The `(r0..r0+h, c0..c0+w)` submatrix.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Matrix {
        Matrix::from_fn(self.p, h, w, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.p, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    pub fn scale(&self, c: &RatFunc) -> Matrix {
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = RatFunc::zero(self.p);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> RatFunc {
        let mut acc = RatFunc::zero(self.p);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (other.rows, other.cols);
        Matrix::from_fn(self.p, self.rows * r, self.cols * c, |i, j| {
            let a = &self[(i / r, j / c)];
            if a.is_zero() {
                return RatFunc::zero(self.p);
            }
            a * &other[(i % r, j % c)]
        })
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
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

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // lightest nonzero entry keeps intermediate expressions small
            let Some(piv) = (r..m.rows).filter(|&i| !m[(i, c)].is_zero()).min_by_key(|&i| weight(&m[(i, c)])) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let x = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<RatFunc>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![RatFunc::zero(self.p); self.cols];
            v[f] = RatFunc::one(self.p);
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -&r[(row, f)];
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = RatFunc::one(self.p);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn det(&self) -> RatFunc {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = RatFunc::one(self.p);
        for c in 0..n {
            let Some(piv) = (c..n).filter(|&i| !m[(i, c)].is_zero()).min_by_key(|&i| weight(&m[(i, c)])) else {
                return RatFunc::zero(self.p);
            };
            if piv != c {
                m.swap_rows(piv, c);
                det = -det;
            }
            let d = m[(c, c)].clone();
            det = &det * &d;
            let inv = d.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    if m[(c, j)].is_zero() {
                        continue;
                    }
                    let x = &m[(i, j)] - &(&f * &m[(c, j)]);
                    m[(i, j)] = x;
                }
            }
        }
        det
    }

    /// Solves `self * x = b` for one solution, if any.
    pub fn solve(&self, b: &[RatFunc]) -> Option<Vec<RatFunc>> {
        let mut aug = Matrix::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![RatFunc::zero(self.p); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Entries rendered in the textual format, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = RatFunc;
    fn index(&self, (i, j): (usize, usize)) -> &RatFunc {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFunc {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let x = &out[(i, j)] + &(a * b);
                    out[(i, j)] = x;
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_ratfunc;

    fn m(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(3, rows.iter().map(|r| r.iter().map(|s| parse_ratfunc(s, 3).unwrap()).collect()).collect())
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&["t", "1", "0"], &["1", "t+1", "2"], &["0", "t^2", "1/t"]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!((&inv * &a).is_identity());
        let d = a.det();
        assert_eq!(&d * &inv.det(), RatFunc::one(3));
        let sing = m(&[&["1", "t"], &["t", "t^2"]]);
        assert!(sing.inverse().is_none());
        assert!(sing.det().is_zero());
    }

    #[test]
    fn nullspace_and_rank() {
        let a = m(&[&["1", "t", "t^2"], &["2", "2*t", "2*t^2"]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_kron() {
        let a = m(&[&["t", "1"], &["0", "1"]]);
        let b = vec![RatFunc::one(3), RatFunc::t(3)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let k = a.kron(&Matrix::identity(3, 2));
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 0)], RatFunc::t(3));
        assert_eq!(k[(1, 3)], RatFunc::one(3));
        assert!(k[(0, 1)].is_zero());
    }
}
