use super::module::GModule;
use crate::algebra::{flatten, Algebra, CoordMap, Elem};
use crate::error::{Error, Result};
use crate::funcfield::RatFunc;
use crate::linalg::{Echelon, Matrix, SparseMatrix, SparseVec};

/// `End_{k[G]}(V)` as an algebra acting naturally on `V`.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub n: usize,
    pub basis: Vec<SparseMatrix>,
    pub alg: Algebra,
    pub coords: CoordMap,
}

impl EndAlgebra {
    /// Wraps a basis of matrices; closure and identity membership are verified.
    pub fn from_basis(p: u32, basis: Vec<SparseMatrix>) -> Result<EndAlgebra> {
        let n = basis.first().map_or(0, |b| b.rows());
        let (alg, coords) = Algebra::from_sparse_matrices(p, &basis)?;
        Ok(EndAlgebra { n, basis, alg, coords })
    }

    /// Assembles an endomorphism algebra from precomputed parts without re-deriving products.
    pub fn from_parts(n: usize, basis: Vec<SparseMatrix>, alg: Algebra, coords: CoordMap) -> EndAlgebra {
        EndAlgebra { n, basis, alg, coords }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix_of(&self, x: &[RatFunc]) -> SparseMatrix {
        self.alg.rep_of(x)
    }

    pub fn coords_of(&self, m: &SparseMatrix) -> Option<Elem> {
        self.coords.coords_of_sparse(&flatten(m))
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.coords_of(&SparseMatrix::from_dense(m)).is_some()
    }
}

fn combine(mut row: SparseVec) -> SparseVec {
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

/// Basis of `{X : X g = g X for every generator}`, one matrix per free unknown.
///
/// The unknown `X[i][j]` sits at `n i + j`; each basis matrix has a 1 at its own
/// free position and 0 at the others.
pub fn commutant_basis(m: &GModule) -> Vec<SparseMatrix> {
    let p = m.prime();
    let n = m.dim();
    let mut ech = Echelon::new(p, n * n);
    for g in &m.action {
        // X N = N X with N = g - 1 has the same solutions and is sparser
        let nmat = g - &Matrix::identity(p, n);
        let s = SparseMatrix::from_dense(&nmat);
        let cols = s.transpose();
        for i in 0..n {
            for l in 0..n {
                let mut row: SparseVec = cols.row(l).iter().map(|(j, x)| (n * i + j, x.clone())).collect();
                row.extend(s.row(i).iter().map(|(j, x)| (n * j + l, -x)));
                let row = combine(row);
                if !row.is_empty() {
                    ech.insert(&row);
                }
            }
        }
    }
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let mut rows: Vec<SparseVec> = vec![Vec::new(); n];
            for (k, x) in v {
                rows[k / n].push((k % n, x));
            }
            SparseMatrix::from_rows(p, n, rows)
        })
        .collect()
}

pub fn endomorphism_algebra(m: &GModule) -> Result<EndAlgebra> {
    m.check()?;
    let basis = commutant_basis(m);
    if basis.is_empty() {
        return Err(Error::cert("empty commutant"));
    }
    EndAlgebra::from_basis(m.prime(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_module_gives_full_matrix_algebra() {
        let e = endomorphism_algebra(&GModule::trivial(3, 3, 2)).unwrap();
        assert_eq!(e.dim(), 9);
    }

    #[test]
    fn group_algebra_is_its_own_commutant() {
        let e = endomorphism_algebra(&GModule::regular(3, 3)).unwrap();
        assert_eq!(e.dim(), 27);
        assert!(e.alg.is_commutative());
    }

    #[test]
    fn commutant_elements_commute_with_generators() {
        let m = GModule::regular(3, 2);
        for b in commutant_basis(&m) {
            let d = b.to_dense();
            for g in &m.action {
                assert_eq!(&d * g, g * &d);
            }
        }
    }
}
