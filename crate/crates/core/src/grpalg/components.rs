use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::algebra::{elem_add, elem_scale, elem_sub, Algebra, Elem, InvolutionAlgebra};
use crate::csa::{clifford_pair, extract_quaternion, involution_kind, InvolutionKind};
use crate::error::{Error, Result};
use crate::funcfield::{factor, Place, Poly, RatFunc};
use crate::linalg::{sparse_from_dense, sparse_to_dense, Echelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Behavior {
    Stable,
    Swapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitness {
    Split,
    /// Brauer class of a quaternion division algebra.
    NonsplitQuaternion,
    Unknown,
}

impl Splitness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Splitness::Split => "split",
            Splitness::NonsplitQuaternion => "nonsplit-quaternion",
            Splitness::Unknown => "unknown",
        }
    }
}

/// A simple factor of a semisimple algebra, or a pair of factors swapped by the involution.
#[derive(Clone, Debug)]
pub struct Component {
    pub dim: usize,
    pub center_dim: usize,
    pub behavior: Behavior,
    /// `None` when no involution was given.
    pub kind: Option<InvolutionKind>,
    pub sym_dim: Option<usize>,
    /// Degree over the center of one simple factor.
    pub degree: usize,
    pub splitness: Splitness,
    pub ramification: Option<BTreeSet<Place>>,
    /// Central idempotent in the ambient algebra.
    pub idempotent: Elem,
    /// The component as an algebra, with the restricted involution when one was given.
    pub algebra: Algebra,
    pub involution: Option<InvolutionAlgebra>,
}

impl Component {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "center_dim": self.center_dim,
            "behavior": match self.behavior { Behavior::Stable => "stable", Behavior::Swapped => "swapped-with-partner" },
            "kind": self.kind.map(|k| k.to_string()),
            "sym_dim": self.sym_dim,
            "degree": self.degree,
            "splitness": self.splitness.as_str(),
            "ramification": self.ramification.as_ref().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub total_dim: usize,
    pub components: Vec<Component>,
}

impl ComponentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "total_dim": self.total_dim,
            "components": self.components.iter().map(Component::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn decompose_components(ia: &InvolutionAlgebra) -> Result<ComponentReport> {
    decompose(&ia.alg, Some(ia))
}

/// Decomposition without an involution; kinds are left open.
pub fn decompose_algebra(alg: &Algebra) -> Result<ComponentReport> {
    decompose(alg, None)
}

fn decompose(alg: &Algebra, ia: Option<&InvolutionAlgebra>) -> Result<ComponentReport> {
    let idempotents = central_idempotents(alg)?;
    let mut used = vec![false; idempotents.len()];
    let mut components = Vec::new();
    for r in 0..idempotents.len() {
        if used[r] {
            continue;
        }
        used[r] = true;
        let e = &idempotents[r];
        let (behavior, idem) = match ia {
            Some(ia) => {
                let image = ia.apply(e);
                if image == *e {
                    (Behavior::Stable, e.clone())
                } else {
                    let s = (0..idempotents.len())
                        .find(|&s| !used[s] && idempotents[s] == image)
                        .ok_or_else(|| Error::cert("involution does not permute the central idempotents"))?;
                    used[s] = true;
                    (Behavior::Swapped, elem_add(e, &idempotents[s]))
                }
            }
            None => (Behavior::Stable, e.clone()),
        };
        let (sub, basis, cm) = ideal_algebra(alg, &idem)?;
        let involution = match ia {
            Some(ia) => {
                let images: Vec<Elem> = basis
                    .iter()
                    .map(|b| cm.coords(&ia.apply(b)).ok_or_else(|| Error::cert("involution does not preserve a component")))
                    .collect::<Result<_>>()?;
                Some(InvolutionAlgebra::from_images(sub.clone(), &images))
            }
            None => None,
        };
        let center_dim = sub.center().len();
        let simple_dim = if behavior == Behavior::Swapped { sub.dim() / 2 } else { sub.dim() };
        let degree = (simple_dim as f64).sqrt().round() as usize;
        let (kind, sym_dim) = match &involution {
            Some(inv) => {
                let k = involution_kind(inv)?;
                (Some(k.kind), Some(k.sym_dim))
            }
            None => (None, None),
        };
        let (splitness, ramification) = if behavior == Behavior::Swapped {
            let (factor_alg, _, _) = ideal_algebra(alg, e)?;
            classify_split(&factor_alg, None, degree)?
        } else {
            classify_split(&sub, involution.as_ref().filter(|_| kind == Some(InvolutionKind::Orthogonal)), degree)?
        };
        components.push(Component {
            dim: sub.dim(),
            center_dim,
            behavior,
            kind,
            sym_dim,
            degree,
            splitness,
            ramification,
            idempotent: idem,
            algebra: sub,
            involution,
        });
    }
    let total: usize = components.iter().map(|c| c.dim).sum();
    if total != alg.dim() {
        return Err(Error::cert("component dimensions do not add up"));
    }
    Ok(ComponentReport { total_dim: total, components })
}

/// `A e` as an algebra with unit `e`, its basis in `A`, and coordinates.
fn ideal_algebra(alg: &Algebra, e: &[RatFunc]) -> Result<(Algebra, Vec<Elem>, crate::algebra::CoordMap)> {
    let p = alg.prime();
    let d = alg.dim();
    let mut ech = Echelon::new(p, d);
    for j in 0..d {
        ech.insert(&sparse_from_dense(&alg.mul(&alg.basis(j), e)));
    }
    let basis: Vec<Elem> = ech.rref_rows().iter().map(|v| sparse_to_dense(v, d, p)).collect();
    let (sub, cm) = alg.subalgebra(&basis, e)?;
    Ok((sub, basis, cm))
}

/// Splitness of a central simple algebra of the given degree.
fn classify_split(
    alg: &Algebra,
    orthogonal: Option<&InvolutionAlgebra>,
    degree: usize,
) -> Result<(Splitness, Option<BTreeSet<Place>>)> {
    if alg.center().len() != 1 {
        return Ok((Splitness::Unknown, None));
    }
    match alg.dim() {
        1 => return Ok((Splitness::Split, Some(BTreeSet::new()))),
        4 => {
            let pres = extract_quaternion(alg)?;
            let ram = pres.quaternion.ramification_set()?;
            let s = if ram.is_empty() { Splitness::Split } else { Splitness::NonsplitQuaternion };
            return Ok((s, Some(ram)));
        }
        16 => {
            if let Some(ia) = orthogonal {
                if let Some(ram) = clifford_pair(ia)?.algebra_ramification() {
                    let s = if ram.is_empty() { Splitness::Split } else { Splitness::NonsplitQuaternion };
                    return Ok((s, Some(ram)));
                }
            }
        }
        _ => {}
    }
    if has_small_left_ideals(alg, degree) {
        return Ok((Splitness::Split, Some(BTreeSet::new())));
    }
    Ok((Splitness::Unknown, None))
}

/// Searches small elements for zero divisors; the dimensions `n j` of the left ideals
/// they generate bound the index by `gcd(n, j, ...)`, and index 1 means split.
fn has_small_left_ideals(alg: &Algebra, degree: usize) -> bool {
    let p = alg.prime();
    let d = alg.dim();
    if degree * degree != d || degree < 2 {
        return false;
    }
    let mut g = degree;
    for x in small_elements(alg) {
        for lam in rational_roots(&alg.min_poly(&x)).unwrap_or_default() {
            let y = elem_sub(&x, &elem_scale(alg.one(), &lam));
            let mut ech = Echelon::new(p, d);
            for j in 0..d {
                ech.insert(&sparse_from_dense(&alg.mul(&alg.basis(j), &y)));
            }
            let r = ech.rank();
            if r > 0 && r < d && r.is_multiple_of(degree) {
                g = gcd(g, r / degree);
                if g == 1 {
                    return true;
                }
            }
        }
    }
    false
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn small_elements(alg: &Algebra) -> Vec<Elem> {
    let p = alg.prime();
    let d = alg.dim();
    let mut out: Vec<Elem> = (0..d).map(|i| alg.basis(i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            out.push(elem_add(&alg.basis(i), &alg.basis(j)));
            out.push(elem_add(&alg.basis(i), &elem_scale(&alg.basis(j), &RatFunc::t(p))));
        }
    }
    out
}

/// Primitive idempotents of the center, when the center is a product of copies of k.
pub(crate) fn central_idempotents(alg: &Algebra) -> Result<Vec<Elem>> {
    let p = alg.prime();
    let center = alg.center();
    let c = center.len();
    if c == 1 {
        return Ok(vec![alg.one().clone()]);
    }
    let mut primitive = None;
    'search: for weights in weight_sequences(p, c) {
        let mut z = alg.zero();
        for (w, b) in weights.iter().zip(&center) {
            z = elem_add(&z, &elem_scale(b, w));
        }
        let mp = alg.min_poly(&z);
        if mp.len() == c {
            primitive = Some((z, mp));
            break 'search;
        }
    }
    let (z, mp) = primitive.ok_or_else(|| Error::Unsupported("unsupported center: no primitive central element found".into()))?;
    let roots = rational_roots(&mp)?;
    if roots.len() != c {
        return Err(Error::Unsupported("unsupported center: it is not a product of copies of k".into()));
    }
    let mut idempotents = Vec::with_capacity(c);
    for (r, lr) in roots.iter().enumerate() {
        let mut e = alg.one().clone();
        for (s, ls) in roots.iter().enumerate() {
            if s != r {
                let num = elem_sub(&z, &elem_scale(alg.one(), ls));
                e = elem_scale(&alg.mul(&e, &num), &(lr - ls).inv());
            }
        }
        idempotents.push(e);
    }
    for e in &idempotents {
        if alg.mul(e, e) != *e {
            return Err(Error::cert("central idempotent is not idempotent"));
        }
    }
    Ok(idempotents)
}

fn weight_sequences(p: u32, c: usize) -> impl Iterator<Item = Vec<RatFunc>> {
    (0..3).map(move |round| {
        (0..c)
            .map(|i| match round {
                0 => RatFunc::constant(i as i64, p),
                1 => RatFunc::t(p).pow(i as i64),
                _ => RatFunc::t(p).pow((i * i) as i64 + 1),
            })
            .collect()
    })
}

/// Distinct roots in F_p(t) of `X^d - sum c_k X^k`, by the rational root theorem.
pub(crate) fn rational_roots(c: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let p = c.first().map_or(3, |x| x.prime());
    let d = c.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut coeffs: Vec<RatFunc> = c.iter().map(|x| -x).collect();
    coeffs.push(RatFunc::one(p));
    let mut den = Poly::one(p);
    for x in &coeffs {
        let g = den.gcd(x.den());
        den = &den * &x.den().exact_div(&g);
    }
    let ints: Vec<Poly> = coeffs.iter().map(|x| x.num() * &den.exact_div(x.den())).collect();
    let eval = |r: &RatFunc| {
        let mut acc = RatFunc::zero(p);
        for a in coeffs.iter().rev() {
            acc = &(&acc * r) + a;
        }
        acc.is_zero()
    };
    let mut roots = Vec::new();
    let low = ints.iter().position(|x| !x.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(RatFunc::zero(p));
    }
    let a0 = &ints[low];
    let ad = &ints[d];
    for u in divisors(a0)? {
        for w in divisors(ad)? {
            for k in 1..p {
                let r = RatFunc::new(u.scale(k), w.clone());
                if !roots.contains(&r) && eval(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort_by(|a, b| (a.num(), a.den()).cmp(&(b.num(), b.den())));
    Ok(roots)
}

fn divisors(a: &Poly) -> Result<Vec<Poly>> {
    let f = factor(a)?;
    let mut out = vec![Poly::one(a.prime())];
    for (irr, m) in &f.factors {
        let mut next = Vec::new();
        for d in &out {
            let mut pw = Poly::one(a.prime());
            for _ in 0..=*m {
                next.push(d * &pw);
                pw = &pw * irr;
            }
        }
        out = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csa::{adjoint_involution, Quaternion};
    use crate::linalg::Matrix;
    use crate::linalg::SparseVec;

    fn k_times_k(p: u32) -> Algebra {
        let e = |i: usize| -> SparseVec { vec![(i, RatFunc::one(p))] };
        let table = vec![vec![e(0), Vec::new()], vec![Vec::new(), e(1)]];
        Algebra::from_table(p, table, vec![RatFunc::one(p), RatFunc::one(p)])
    }

    #[test]
    fn swap_on_k_times_k_is_unitary_pair() {
        let alg = k_times_k(3);
        let swap = vec![vec![RatFunc::zero(3), RatFunc::one(3)], vec![RatFunc::one(3), RatFunc::zero(3)]];
        let ia = InvolutionAlgebra::from_images(alg, &swap);
        let rep = decompose_components(&ia).unwrap();
        assert_eq!(rep.components.len(), 1);
        let c = &rep.components[0];
        assert_eq!((c.behavior, c.kind, c.splitness), (Behavior::Swapped, Some(InvolutionKind::Unitary), Splitness::Split));
    }

    #[test]
    fn identity_on_k_times_k_gives_two_components() {
        let alg = k_times_k(3);
        let id = vec![alg.basis(0), alg.basis(1)];
        let ia = InvolutionAlgebra::from_images(alg, &id);
        let rep = decompose_components(&ia).unwrap();
        assert_eq!(rep.components.len(), 2);
        assert!(rep.components.iter().all(|c| c.kind == Some(InvolutionKind::Orthogonal) && c.splitness == Splitness::Split));
    }

    #[test]
    fn division_quaternion_with_canonical_involution() {
        let h = Quaternion::parse("-1", "t", 3).unwrap();
        let rep = decompose_components(&h.with_canonical(true)).unwrap();
        assert_eq!(rep.components.len(), 1);
        let c = &rep.components[0];
        assert_eq!((c.kind, c.splitness), (Some(InvolutionKind::Symplectic), Splitness::NonsplitQuaternion));
    }

    #[test]
    fn matrix_algebra_detected_split() {
        let ia = adjoint_involution(&Matrix::identity(3, 3)).unwrap();
        let rep = decompose_components(&ia).unwrap();
        assert_eq!(rep.components[0].splitness, Splitness::Split);
        assert_eq!(rep.components[0].kind, Some(InvolutionKind::Orthogonal));
    }

    #[test]
    fn roots_of_split_polynomial() {
        // (X - t)(X - 1/t) = X^2 - (t + 1/t) X + 1
        let p = 3;
        let t = RatFunc::t(p);
        let s = &t + &t.inv();
        let roots = rational_roots(&[-RatFunc::one(p), s]).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&t) && roots.contains(&t.inv()));
        // X^2 - t has no roots
        assert!(rational_roots(&[t.clone(), RatFunc::zero(p)]).unwrap().is_empty());
    }
}
