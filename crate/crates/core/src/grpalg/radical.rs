//! Jacobson radical in characteristic p by iterated trace conditions.
//!
//! For `A` acting faithfully on `V` of dimension `D`, set `I_0` to the kernel of
//! the trace form and, for `p^i <= D`,
//! `I_i = { x in I_{i-1} : g_i(x y) = 0 for all y }` with
//! `g_i(x) = Tr(X^(p^i)) / p^i mod p`, where `X` is an integral lift of the matrix of `x`.
//! The last `I_i` is the radical; the chain stops early once an ideal is nilpotent.
//! On `I_{i-1}`, `g_i` is p^i-semilinear, so the conditions are solved after
//! splitting each value into Frobenius components.

use serde::Serialize;

use crate::algebra::{elem_combination, Algebra, Elem, Quotient};
use crate::error::{Error, Result};
use crate::funcfield::{Poly, RatFunc};
use crate::linalg::{sparse_from_dense, sparse_to_dense, Echelon, SparseMatrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalCertificate {
    pub algebra_dim: usize,
    pub radical_dim: usize,
    /// Smallest `m` with `R^m = 0`.
    pub nilpotency_index: usize,
    pub quotient_dim: usize,
    pub quotient_radical_dim: usize,
}

#[derive(Clone, Debug)]
pub struct Radical {
    /// Reduced row echelon basis, in algebra coordinates.
    pub basis: Vec<Elem>,
    pub certificate: RadicalCertificate,
}

pub fn jacobson_radical(alg: &Algebra) -> Result<Radical> {
    let basis = radical_basis(alg)?;
    let certificate = certify_radical(alg, &basis)?;
    Ok(Radical { basis, certificate })
}

/// Checks that `ideal` is a nilpotent two-sided ideal with semisimple quotient.
pub fn certify_radical(alg: &Algebra, ideal: &[Elem]) -> Result<RadicalCertificate> {
    if !is_two_sided_ideal(alg, ideal) {
        return Err(Error::cert("radical candidate is not a two-sided ideal"));
    }
    let nilpotency_index =
        nilpotency_index(alg, ideal).ok_or_else(|| Error::cert("radical candidate is not nilpotent"))?;
    if nilpotency_index > alg.dim().max(1) {
        return Err(Error::cert("nilpotency index exceeds the dimension"));
    }
    let q = Quotient::new(alg, ideal)?;
    let qrad = radical_basis(&q.alg)?;
    if !qrad.is_empty() {
        return Err(Error::cert(format!("quotient has a radical of dimension {}", qrad.len())));
    }
    Ok(RadicalCertificate {
        algebra_dim: alg.dim(),
        radical_dim: q.ideal_dim(),
        nilpotency_index,
        quotient_dim: q.alg.dim(),
        quotient_radical_dim: 0,
    })
}

fn span(p: u32, d: usize, vs: &[Elem]) -> Echelon {
    let mut ech = Echelon::new(p, d);
    for v in vs {
        ech.insert_dense(v);
    }
    ech
}

pub fn is_two_sided_ideal(alg: &Algebra, ideal: &[Elem]) -> bool {
    let d = alg.dim();
    if let Some(coords) = coordinate_support(ideal) {
        // spanned by basis vectors: check supports of basis products
        let mut inside = vec![false; d];
        for &c in &coords {
            inside[c] = true;
        }
        return coords.iter().all(|&i| {
            (0..d).all(|k| {
                alg.product(i, k).iter().all(|(r, _)| inside[*r]) && alg.product(k, i).iter().all(|(r, _)| inside[*r])
            })
        });
    }
    let ech = span(alg.prime(), d, ideal);
    ideal.iter().all(|x| {
        (0..d).all(|k| {
            let e = alg.basis(k);
            ech.contains(&sparse_from_dense(&alg.mul(x, &e))) && ech.contains(&sparse_from_dense(&alg.mul(&e, x)))
        })
    })
}

/// Indices when every vector is a multiple of a basis vector.
fn coordinate_support(vs: &[Elem]) -> Option<Vec<usize>> {
    vs.iter()
        .map(|v| {
            let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
            let first = nz.next()?.0;
            nz.next().is_none().then_some(first)
        })
        .collect()
}

/// Smallest `m` with `I^m V = 0` in the faithful representation, if any.
pub fn nilpotency_index(alg: &Algebra, ideal: &[Elem]) -> Option<usize> {
    let p = alg.prime();
    let n = alg.rep_dim();
    if ideal.is_empty() {
        return Some(1);
    }
    let mats: Vec<SparseMatrix> = ideal.iter().map(|x| alg.rep_of(x)).collect();
    let mut current: Vec<SparseVec> = (0..n).map(|i| vec![(i, RatFunc::one(p))]).collect();
    for m in 1..=n + 1 {
        let mut next = Echelon::new(p, n);
        for a in &mats {
            for w in &current {
                if next.is_full() {
                    break;
                }
                next.insert(&a.mul_vec(w));
            }
        }
        if next.rank() == 0 {
            return Some(m);
        }
        if next.rank() == current.len() {
            return None;
        }
        current = next.rref_rows();
    }
    None
}

fn trace_kernel(alg: &Algebra) -> Vec<Elem> {
    let p = alg.prime();
    let d = alg.dim();
    let tr: Vec<RatFunc> = alg.rep().iter().map(|m| m.trace()).collect();
    let mut ech = Echelon::new(p, d);
    for k in 0..d {
        // Tr(e_j e_k) as a linear form in the coordinates x_j
        let row: SparseVec = (0..d)
            .filter_map(|j| {
                let mut acc = RatFunc::zero(p);
                for (l, c) in alg.product(j, k) {
                    acc = &acc + &(c * &tr[*l]);
                }
                (!acc.is_zero()).then_some((j, acc))
            })
            .collect();
        if !row.is_empty() {
            ech.insert(&row);
        }
    }
    ech.nullspace().iter().map(|v| sparse_to_dense(v, d, p)).collect()
}

/// Polynomials over `Z / p^e`, low-first.
type LiftPoly = Vec<i64>;

fn lift_mul(a: &LiftPoly, b: &LiftPoly, m: i64) -> LiftPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % m;
        }
    }
    out
}

fn lift_add_assign(a: &mut LiftPoly, b: &LiftPoly, m: i64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = (*x + y) % m;
    }
}

fn lift_matmul(a: &[Vec<LiftPoly>], b: &[Vec<LiftPoly>], m: i64) -> Vec<Vec<LiftPoly>> {
    let n = a.len();
    let mut out = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_empty() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_empty() {
                    let prod = lift_mul(&a[i][k], &b[k][j], m);
                    lift_add_assign(&mut out[i][j], &prod, m);
                }
            }
        }
    }
    out
}

/// `g_i` of the matrix `x`: `Tr(X^(p^i)) / p^i mod p` on an integral lift.
fn trace_power_quotient(x: &SparseMatrix, p: u32, i: u32) -> Result<RatFunc> {
    let n = x.rows();
    let mut den = Poly::one(p);
    for r in 0..n {
        for (_, v) in x.row(r) {
            let g = den.gcd(v.den());
            den = &den * &v.den().exact_div(&g);
        }
    }
    let modulus = (p as i64).pow(i + 1);
    let mut lifted = vec![vec![Vec::new(); n]; n];
    for r in 0..n {
        for (c, v) in x.row(r) {
            let poly = v.num() * &den.exact_div(v.den());
            lifted[r][*c] = poly.coeffs().iter().map(|&c| c as i64).collect();
        }
    }
    let mut power = lifted;
    for _ in 0..i {
        // X -> X^p
        let base = power.clone();
        for _ in 1..p {
            power = lift_matmul(&power, &base, modulus);
        }
    }
    let mut tr: LiftPoly = Vec::new();
    for (r, row) in power.iter().enumerate() {
        lift_add_assign(&mut tr, &row[r], modulus);
    }
    let pi = (p as i64).pow(i);
    let mut coeffs = Vec::with_capacity(tr.len());
    for c in tr {
        let c = c.rem_euclid(modulus);
        if c % pi != 0 {
            return Err(Error::cert("lifted trace is not divisible by the expected prime power"));
        }
        coeffs.push(((c / pi) % p as i64) as u32);
    }
    let g = Poly::from_raw(coeffs, p);
    Ok(RatFunc::new(g, den.pow(pi as u64)))
}

/// The radical without certification (reduced row echelon basis).
pub fn radical_basis(alg: &Algebra) -> Result<Vec<Elem>> {
    let p = alg.prime();
    let d = alg.dim();
    let mut current = trace_kernel(alg);
    let mut q = p as usize;
    let mut i = 1;
    while !current.is_empty() && nilpotency_index(alg, &current).is_none() {
        if q > alg.rep_dim() {
            return Err(Error::cert("trace chain ended on a non-nilpotent ideal"));
        }
        let mut ech = Echelon::new(p, current.len());
        for k in 0..d {
            let e = alg.basis(k);
            let values: Vec<RatFunc> = current
                .iter()
                .map(|b| trace_power_quotient(&alg.rep_of(&alg.mul(b, &e)), p, i))
                .collect::<Result<_>>()?;
            let comps: Vec<Vec<RatFunc>> = values.iter().map(|v| v.frobenius_components(q)).collect();
            for r in 0..q {
                let row: SparseVec =
                    comps.iter().enumerate().filter(|(_, c)| !c[r].is_zero()).map(|(j, c)| (j, c[r].clone())).collect();
                if !row.is_empty() {
                    ech.insert(&row);
                }
            }
        }
        current = ech
            .nullspace()
            .iter()
            .map(|c| elem_combination(p, d, &sparse_to_dense(c, current.len(), p), &current))
            .collect();
        q *= p as usize;
        i += 1;
    }
    let ech = span(p, d, &current);
    Ok(ech.rref_rows().iter().map(|v| sparse_to_dense(v, d, p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpalg::{endomorphism_algebra, GModule};
    use crate::linalg::Matrix;

    #[test]
    fn group_algebra_radical_is_augmentation_ideal() {
        for n in 1..=2 {
            let e = endomorphism_algebra(&GModule::regular(3, n)).unwrap();
            let r = jacobson_radical(&e.alg).unwrap();
            let size = 3usize.pow(n as u32);
            assert_eq!(r.basis.len(), size - 1);
            assert_eq!(r.certificate.quotient_dim, 1);
            // radical elements have column sums zero: the augmentation vanishes
            for x in &r.basis {
                let m = e.matrix_of(x).to_dense();
                for c in 0..size {
                    assert!(m.column(c).iter().fold(RatFunc::zero(3), |a, b| &a + b).is_zero());
                }
            }
        }
    }

    #[test]
    fn full_matrix_algebra_is_semisimple() {
        let e = endomorphism_algebra(&GModule::trivial(3, 3, 1)).unwrap();
        let r = jacobson_radical(&e.alg).unwrap();
        assert!(r.basis.is_empty());
        assert_eq!(r.certificate.nilpotency_index, 1);
    }

    #[test]
    fn upper_triangular_radical() {
        // commutant of a single Jordan block of size 3 over F_5(t): k[N], radical spanned by N, N^2
        let j = Matrix::from_ints(5, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let m = GModule::new(5, vec!["g".into()], vec![j]).unwrap();
        let e = endomorphism_algebra(&m).unwrap();
        assert_eq!(e.dim(), 3);
        let r = jacobson_radical(&e.alg).unwrap();
        assert_eq!(r.basis.len(), 2);
        assert_eq!(r.certificate.nilpotency_index, 3);
    }

    #[test]
    fn lifted_trace_of_identity() {
        let id = SparseMatrix::identity(3, 3);
        assert!(trace_power_quotient(&id, 3, 1).unwrap().is_one());
        let t = SparseMatrix::from_dense(&Matrix::identity(3, 1).scale(&RatFunc::t(3)));
        // the 1x1 matrix (t) has trace t^3 after cubing, not divisible by 3
        assert!(trace_power_quotient(&t, 3, 1).is_err());
    }
}
