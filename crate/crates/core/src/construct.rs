//! The quaternion constructions: the module `N_H` over `C_p^3`, its invariant form, the
//! tensor pair over `G x G`, and a locally trivial but globally nontrivial pair of forms.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{flatten, unit_elem, Elem, InvolutionAlgebra, Quotient};
use crate::csa::{
    involution_kind, is_canonical_involution, rho_involution, solve_alpha, tensor_involution_algebras, tensor_m2q,
    InvolutionKind, Quaternion, SandwichIso,
};
use crate::error::{Error, Result};
use crate::funcfield::{is_irreducible, Place, Poly, RatFunc};
use crate::grpalg::{
    certify_radical, commutant_basis, decompose_components, hp_verdict_with, jacobson_radical, quotient_with_involution,
    EndAlgebra, GModule, Radical, Splitness, Verdict,
};
use crate::hermitian::{
    check_adjoint_identity, check_invariant, class_element, counterexample_element, induced_involution, lift_class,
    local_hyperbolicity,
};
use crate::linalg::{Echelon, Matrix, SparseMatrix};
use crate::quadform::{equivalent_global, QuadForm};

/// One recomputed identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Records a check and fails on a mismatch.
fn ensure(checks: &mut Vec<Check>, name: &str, pass: bool, detail: impl Into<String>) -> Result<()> {
    let detail = detail.into();
    checks.push(Check { name: name.to_string(), pass, detail: detail.clone() });
    if pass {
        Ok(())
    } else {
        Err(Error::cert(format!("{name}: {detail}")))
    }
}

/// `(-1, t)` and `(-1, (t-1)(t-2))` over `F_3(t)`.
pub fn default_pair() -> (Quaternion, Quaternion) {
    (
        Quaternion::parse("-1", "t", 3).expect("valid quaternion"),
        Quaternion::parse("-1", "(t-1)*(t-2)", 3).expect("valid quaternion"),
    )
}

fn zeros4(p: u32) -> Matrix {
    Matrix::zeros(p, 4, 4)
}

fn unipotent_block(a: &Matrix) -> Matrix {
    let p = a.prime();
    Matrix::block2(&Matrix::identity(p, 4), a, &zeros4(p), &Matrix::identity(p, 4))
}

/// `N_H`: `k^8` with `g_m` acting by `[[I, a_m], [0, I]]`.
pub fn build_n(h: &Quaternion) -> Result<GModule> {
    build_n_from_matrices(h.prime(), &h.a_matrices())
}

pub fn build_n_from_matrices(p: u32, a: &[Matrix; 3]) -> Result<GModule> {
    let names = vec!["g1".to_string(), "g2".to_string(), "g3".to_string()];
    let action = a.iter().map(unipotent_block).collect();
    GModule::with_orders(p, names, action, vec![p as u64; 3])
}

/// `diag(R_y, R_y)` with `R_y` right multiplication by `y`.
fn phi(h: &Quaternion, r: usize) -> Matrix {
    let ry = h.sandwich(&h.basis(0), &h.basis(r));
    Matrix::block2(&ry, &zeros4(h.prime()), &zeros4(h.prime()), &ry)
}

/// `phi(1), phi(i), phi(j), phi(ij)`, then the matrix units of the upper right block.
pub fn adapted_basis(h: &Quaternion) -> Vec<SparseMatrix> {
    let p = h.prime();
    let mut out: Vec<SparseMatrix> = (0..4).map(|r| SparseMatrix::from_dense(&phi(h, r))).collect();
    for i in 0..4 {
        for j in 0..4 {
            let mut m = Matrix::zeros(p, 8, 8);
            m[(i, 4 + j)] = RatFunc::one(p);
            out.push(SparseMatrix::from_dense(&m));
        }
    }
    out
}

fn commutes_with(m: &GModule, x: &SparseMatrix) -> bool {
    m.action.iter().all(|g| {
        let g = SparseMatrix::from_dense(g);
        g.mul(x) == x.mul(&g)
    })
}

/// Structure of `E_N = End_{k[G]}(N_H)` on the adapted basis.
#[derive(Clone, Debug)]
pub struct EnReport {
    pub end: EndAlgebra,
    pub radical: Radical,
    pub quotient: Quotient,
    pub checks: Vec<Check>,
}

pub fn verify_en(m: &GModule, h: &Quaternion) -> Result<EnReport> {
    let p = h.prime();
    let mut checks = Vec::new();
    let direct = commutant_basis(m);
    ensure(&mut checks, "dim E_N = 20", direct.len() == 20, format!("commutant solve gives {}", direct.len()))?;
    let basis = adapted_basis(h);
    let all_commute = basis.iter().all(|x| commutes_with(m, x));
    ensure(&mut checks, "adapted basis commutes with g1, g2, g3", all_commute, "X g = g X for 20 matrices")?;
    let mut ech = Echelon::new(p, 64);
    for x in &direct {
        ech.insert(&flatten(x));
    }
    let inside = basis.iter().all(|x| ech.contains(&flatten(x)));
    ensure(&mut checks, "adapted basis spans E_N", inside && basis.len() == direct.len(), "20 independent elements of the commutant")?;

    let end = EndAlgebra::from_basis(p, basis)?;
    let radical = jacobson_radical(&end.alg)?;
    ensure(
        &mut checks,
        "dim R_N = 16",
        radical.basis.len() == 16,
        format!("trace-chain radical of dimension {}", radical.basis.len()),
    )?;
    let upper = radical.basis.iter().all(|x| x[..4].iter().all(RatFunc::is_zero));
    ensure(&mut checks, "R_N is the upper right block", upper, "radical basis vanishes on phi(H)")?;

    let quotient = Quotient::new(&end.alg, &radical.basis)?;
    let hop = h.algebra(true);
    let same = quotient.complement == [0, 1, 2, 3]
        && (0..4).all(|a| (0..4).all(|b| quotient.alg.product(a, b) == hop.product(a, b)))
        && quotient.alg.one() == hop.one();
    ensure(&mut checks, "E_N / R_N = H^op", same, "y -> phi(y) matches the structure constants of H^op on 1, i, j, ij")?;
    Ok(EnReport { end, radical, quotient, checks })
}

/// `A = [[0, alpha], [-alpha, 0]]` where `alpha` is the skew matrix of `rho`.
pub fn build_q(h: &Quaternion, m: &GModule) -> Result<(QuadForm, Matrix, Vec<Check>)> {
    let p = h.prime();
    let mut checks = Vec::new();
    let rho = rho_involution(h)?;
    for (k, a) in h.a_matrices().iter().enumerate() {
        let flat = a.data().to_vec();
        ensure(&mut checks, &format!("rho(a_{}) = a_{}", k + 1, k + 1), rho.apply(&flat) == flat, "rho on M_4(k) coordinates")?;
    }
    let kind = involution_kind(&rho)?;
    ensure(
        &mut checks,
        "rho is symplectic",
        kind.kind == InvolutionKind::Symplectic && kind.sym_dim == 6,
        format!("{} with dim Sym = {}", kind.kind, kind.sym_dim),
    )?;
    let alpha = solve_alpha(&rho)?;
    ensure(&mut checks, "alpha^T = -alpha", alpha.is_skew(), "one-dimensional solution space, normalized")?;
    let a = Matrix::block2(&zeros4(p), &alpha, &alpha.scale(&RatFunc::constant(-1, p)), &zeros4(p));
    ensure(&mut checks, "A^T = A", a.is_symmetric(), "A = [[0, alpha], [-alpha, 0]]")?;
    let q = QuadForm::new(a)?;
    for (name, g) in m.generators.iter().zip(&m.action) {
        let ok = &(&g.transpose() * q.gram()) * g == *q.gram();
        ensure(&mut checks, &format!("{name}^T A {name} = A"), ok, "G-invariance of q")?;
    }
    Ok((q, alpha, checks))
}

/// A module with invariant form, its endomorphism algebra with the adjoint involution,
/// the radical and the semisimple quotient with its induced involution.
#[derive(Clone, Debug)]
pub struct ConstructionBundle {
    pub quaternions: Vec<Quaternion>,
    pub module: GModule,
    pub form: QuadForm,
    pub end: EndAlgebra,
    pub gamma: InvolutionAlgebra,
    pub radical: Radical,
    pub quotient: Quotient,
    pub quotient_inv: InvolutionAlgebra,
    pub checks: Vec<Check>,
}

impl ConstructionBundle {
    pub fn provenance(&self) -> Value {
        json!({
            "quaternions": self.quaternions.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
            "p": self.module.prime(),
            "module_dim": self.module.dim(),
            "end_dim": self.end.dim(),
            "radical_dim": self.radical.basis.len(),
            "quotient_dim": self.quotient.alg.dim(),
        })
    }
}

/// `(N_H, q)` with every identity of the construction rechecked.
pub fn quaternion_bundle(h: &Quaternion) -> Result<ConstructionBundle> {
    let p = h.prime();
    let mut checks = Vec::new();
    let iso = SandwichIso::new(h)?;
    ensure(&mut checks, "f(1 (x) 1) = I", iso.image(&h.basis(0), &h.basis(0)).is_identity(), "sandwich map on the unit")?;
    let tau_fixes = (1..3).all(|r| h.tau(&h.basis(r)) == h.basis(r));
    ensure(&mut checks, "tau(i) = i, tau(j) = j", tau_fixes, "(ij) conj(x) (ij)^-1")?;

    let m = build_n(h)?;
    m.check()?;
    ensure(&mut checks, "dim N = 8", m.dim() == 8, "2 d^2 with d = 2")?;
    let g1 = Matrix::block2(&Matrix::identity(p, 4), &Matrix::identity(p, 4), &zeros4(p), &Matrix::identity(p, 4));
    ensure(&mut checks, "g1 = [[I, I], [0, I]]", m.action[0] == g1, "a_1 = f(1 (x) 1) = 1")?;
    let id8 = Matrix::identity(p, 8);
    let square_zero = m.action.iter().all(|g| {
        let n = g - &id8;
        (&n * &n).is_zero()
    });
    ensure(&mut checks, "(g_m - I)^2 = 0", square_zero, "so g_m^p = 1 in characteristic p")?;

    let en = verify_en(&m, h)?;
    checks.extend(en.checks);
    let (q, alpha, qchecks) = build_q(h, &m)?;
    checks.extend(qchecks);
    let end = en.end;

    let gamma = induced_involution(&m, &q, &end)?;
    ensure(&mut checks, "gamma is the adjoint of q", check_adjoint_identity(&q, &end, &gamma), "X^T A = A gamma(X) on a basis")?;
    let ainv = alpha.inverse().ok_or(Error::Degenerate)?;
    let block_formula = (0..end.dim()).all(|k| {
        let x = end.basis[k].to_dense();
        let (xa, y) = (x.block(0, 0, 4, 4), x.block(0, 4, 4, 4));
        let xs = &(&ainv * &xa.transpose()) * &alpha;
        let ys = (&(&ainv * &y.transpose()) * &alpha).scale(&RatFunc::constant(-1, p));
        let expect = Matrix::block2(&xs, &ys, &zeros4(p), &xs);
        end.matrix_of(&gamma.apply(&end.alg.basis(k))).to_dense() == expect
    });
    ensure(&mut checks, "gamma on [[x, y], [0, x]]", block_formula, "[[a^-1 x^T a, -a^-1 y^T a], [0, a^-1 x^T a]]")?;
    let inverts = m.action.iter().all(|g| {
        let gi = g.inverse().expect("unipotent");
        match (end.coords_of(&SparseMatrix::from_dense(g)), end.coords_of(&SparseMatrix::from_dense(&gi))) {
            (Some(c), Some(ci)) => gamma.apply(&c) == ci,
            _ => false,
        }
    });
    ensure(&mut checks, "gamma(g_m) = g_m^-1", inverts, "generators lie in E_N since G is abelian")?;

    let (quotient, bar) = quotient_with_involution(&gamma, &en.radical.basis)?;
    let canonical = is_canonical_involution(&bar)
        && (0..4).all(|r| {
            let e = unit_elem(p, 4, r);
            let trd = h.trd(&h.basis(r));
            let mut expect: Elem = e.iter().map(|x| -x).collect();
            expect[0] = &expect[0] + &trd;
            bar.apply(&e) == expect
        });
    ensure(&mut checks, "induced involution is canonical", canonical, "bar(x) = Trd(x) - x on 1, i, j, ij")?;

    Ok(ConstructionBundle {
        quaternions: vec![h.clone()],
        module: m,
        form: q,
        end,
        gamma,
        radical: en.radical,
        quotient,
        quotient_inv: bar,
        checks,
    })
}

/// `(N_1, q_1) (x) (N_2, q_2)` over `G x G`, on the Kronecker products of the two
/// endomorphism bases, checked against the directly solved commutant.
pub fn tensor_pair(b1: &ConstructionBundle, b2: &ConstructionBundle) -> Result<ConstructionBundle> {
    let p = b1.module.prime();
    if b2.module.prime() != p {
        return Err(Error::input("bundles over different primes"));
    }
    let mut checks = Vec::new();
    let m = b1.module.tensor(&b2.module);
    m.check()?;
    let (n1, n2) = (b1.module.dim(), b2.module.dim());
    ensure(&mut checks, "dim N1 (x) N2", m.dim() == n1 * n2, format!("{} generators", m.generators.len()))?;
    let q = QuadForm::new(b1.form.gram().kron(b2.form.gram()))?;
    check_invariant(&m, &q)?;
    ensure(&mut checks, "q1 (x) q2 is G x G invariant", true, "g^T A g = A for six generators")?;

    let ia = tensor_involution_algebras(&b1.gamma, &b2.gamma);
    let basis: Vec<SparseMatrix> = ia.alg.rep().to_vec();
    let commute = basis.iter().all(|x| commutes_with(&m, x));
    ensure(&mut checks, "E1 (x) E2 commutes with G x G", commute, format!("{} Kronecker products", basis.len()))?;
    let flat = basis.iter().map(flatten).collect();
    let coords = crate::algebra::CoordMap::tensor(&b1.end.coords, &b2.end.coords, n1, n2, flat);
    let end = EndAlgebra::from_parts(m.dim(), basis, ia.alg.clone(), coords);
    let (d1, d2) = (b1.end.dim(), b2.end.dim());
    ensure(&mut checks, "dim E = dim E1 * dim E2", end.dim() == d1 * d2, format!("{} = {d1} * {d2}", end.dim()))?;
    let direct = commutant_basis(&m);
    let mut ech = Echelon::new(p, m.dim() * m.dim());
    for x in &direct {
        ech.insert(&flatten(x));
    }
    let same = direct.len() == end.dim() && end.basis.iter().all(|x| ech.contains(&flatten(x)));
    ensure(&mut checks, "E1 (x) E2 is the whole commutant", same, format!("direct commutant solve gives {}", direct.len()))?;

    let gamma = InvolutionAlgebra::new(end.alg.clone(), ia.inv.clone());
    gamma.verify(4096)?;
    ensure(&mut checks, "gamma1 (x) gamma2 is the adjoint of q", check_adjoint_identity(&q, &end, &gamma), "X^T A = A gamma(X) on a basis")?;

    // a coordinate lies in the radical when either factor does
    let in_r1 = radical_coordinates(&b1.radical, d1)?;
    let in_r2 = radical_coordinates(&b2.radical, d2)?;
    let ideal: Vec<Elem> = (0..d1 * d2)
        .filter(|k| in_r1[k / d2] || in_r2[k % d2])
        .map(|k| unit_elem(p, d1 * d2, k))
        .collect();
    let certificate = certify_radical(&end.alg, &ideal)?;
    ensure(
        &mut checks,
        "radical of E",
        certificate.radical_dim == d1 * d2 - b1.quotient.alg.dim() * b2.quotient.alg.dim(),
        format!("dim {} nilpotent of index {}, semisimple quotient of dim {}", certificate.radical_dim, certificate.nilpotency_index, certificate.quotient_dim),
    )?;
    let radical = Radical { basis: ideal, certificate };
    let (quotient, bar) = quotient_with_involution(&gamma, &radical.basis)?;
    let kind = involution_kind(&bar)?;
    ensure(
        &mut checks,
        "induced involution on E / R is orthogonal",
        kind.kind == InvolutionKind::Orthogonal,
        format!("{} with dim Sym = {}", kind.kind, kind.sym_dim),
    )?;

    let mut quaternions = b1.quaternions.clone();
    quaternions.extend(b2.quaternions.iter().cloned());
    Ok(ConstructionBundle { quaternions, module: m, form: q, end, gamma, radical, quotient, quotient_inv: bar, checks })
}

/// Marks coordinates that are basis vectors of the radical; the radical must be a coordinate ideal.
fn radical_coordinates(r: &Radical, d: usize) -> Result<Vec<bool>> {
    let mut mark = vec![false; d];
    for v in &r.basis {
        let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
        match (nz.next(), nz.next()) {
            (Some((i, _)), None) => mark[i] = true,
            _ => return Err(Error::Unsupported("radical is not spanned by basis coordinates".into())),
        }
    }
    Ok(mark)
}

/// The first `count` places of degree at least 2 outside `avoid`, by degree then coefficients.
pub fn sample_places(p: u32, count: usize, avoid: &BTreeSet<Place>) -> Vec<Place> {
    let mut out = Vec::new();
    let mut d = 2;
    while out.len() < count {
        for f in Poly::monics_of_degree(d, p) {
            if out.len() == count {
                break;
            }
            if is_irreducible(&f) {
                let v = Place::finite(f).expect("monic irreducible");
                if !avoid.contains(&v) {
                    out.push(v);
                }
            }
        }
        d += 1;
    }
    out
}

fn gram_strings(m: &Matrix) -> Value {
    json!(m.to_strings())
}

fn place_names(s: &BTreeSet<Place>) -> Vec<String> {
    s.iter().map(|v| v.to_string()).collect()
}

/// The assembled counterexample: two G-invariant forms on `N_1 (x) N_2`.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub quaternions: [Quaternion; 2],
    pub ram1: BTreeSet<Place>,
    pub ram2: BTreeSet<Place>,
    pub ram_q: BTreeSet<Place>,
    /// `(place, ramified in Q, hyperbolic)`.
    pub hyperbolicity: Vec<(Place, bool, bool)>,
    pub local_table: Vec<Value>,
    pub global_certificate: Value,
    pub q: QuadForm,
    pub q_prime: QuadForm,
    pub plain_equivalent: bool,
    pub verdict: Verdict,
    pub cross_checks: Value,
    pub checks: Vec<Check>,
}

impl CounterexampleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.q.prime(),
            "inputs": { "h1": self.quaternions[0].to_string(), "h2": self.quaternions[1].to_string() },
            "ramification": {
                "h1": place_names(&self.ram1),
                "h2": place_names(&self.ram2),
                "q": place_names(&self.ram_q),
            },
            "local_hyperbolicity": self.hyperbolicity.iter().map(|(v, r, h)| json!({
                "place": v.to_string(), "ramified": r, "hyperbolic": h,
            })).collect::<Vec<_>>(),
            "local_table": self.local_table,
            "global_certificate": self.global_certificate,
            "cross_checks": self.cross_checks,
            "checks": self.checks,
            "forms": { "q": gram_strings(self.q.gram()), "q_prime": gram_strings(self.q_prime.gram()) },
        })
    }
}

/// Runs the whole construction for two quaternion algebras ramified at two places each,
/// with disjoint ramification.
pub fn counterexample_pipeline(h1: &Quaternion, h2: &Quaternion, samples: usize) -> Result<CounterexampleReport> {
    let p = h1.prime();
    if h2.prime() != p {
        return Err(Error::input("quaternions over different primes"));
    }
    let tc = tensor_m2q(h1, h2)?;
    for (name, r) in [("H1", &tc.ram1), ("H2", &tc.ram2)] {
        if r.len() != 2 {
            return Err(Error::pre(format!("{name} must ramify at exactly two places, found {:?}", place_names(r))));
        }
    }
    if !tc.ram1.is_disjoint(&tc.ram2) {
        return Err(Error::pre("ramification sets of H1 and H2 must be disjoint"));
    }
    let b1 = quaternion_bundle(h1)?;
    let b2 = quaternion_bundle(h2)?;
    let t = tensor_pair(&b1, &b2)?;
    let mut checks: Vec<Check> = b1.checks.iter().chain(&b2.checks).chain(&t.checks).cloned().collect();

    let union: BTreeSet<Place> = tc.ram1.union(&tc.ram2).cloned().collect();
    ensure(&mut checks, "Ram(Q) is the union", tc.ram_q == union, format!("{:?}", place_names(&tc.ram_q)))?;

    let report = decompose_components(&t.quotient_inv)?;
    let comp = match report.components.as_slice() {
        [c] => c,
        cs => return Err(Error::cert(format!("expected one component, found {}", cs.len()))),
    };
    let ok = comp.kind == Some(InvolutionKind::Orthogonal)
        && comp.splitness == Splitness::NonsplitQuaternion
        && comp.ramification.as_ref() == Some(&tc.ram_q);
    ensure(&mut checks, "E / R is orthogonal with Brauer class Q", ok, format!("{}", comp.to_json()))?;

    let bar = &t.quotient_inv;
    let mut hyperbolicity = Vec::new();
    let places: Vec<(Place, bool)> = tc
        .ram_q
        .iter()
        .map(|v| (v.clone(), true))
        .chain(sample_places(p, samples, &tc.ram_q).into_iter().map(|v| (v, false)))
        .collect();
    for (v, ramified) in places {
        let hyp = local_hyperbolicity(bar, &v, None)?;
        ensure(&mut checks, &format!("hyperbolic at {v}"), hyp, if ramified { "ramified place" } else { "sampled place" })?;
        hyperbolicity.push((v, ramified, hyp));
    }

    let ce = counterexample_element(bar)?;
    let local_table: Vec<Value> = ce
        .records
        .iter()
        .map(|(v, ru, r1)| json!({ "place": v.to_string(), "q": r1.to_json(), "q_prime": ru.to_json(), "equal": ru == r1 }))
        .collect();
    ensure(
        &mut checks,
        "local records agree at every bad place",
        ce.records.iter().all(|(_, a, b)| a == b) && !ce.records.is_empty(),
        format!("{} places", ce.records.len()),
    )?;
    ensure(&mut checks, "global classes differ", ce.certificate["differs"] == json!(true), ce.certificate.to_string())?;

    let u = lift_class(&t.gamma, &t.quotient, &ce.u)?;
    ensure(&mut checks, "lift projects back", t.quotient.project(&u) == ce.u, "u in E maps to the class in E / R")?;
    let umat = t.end.matrix_of(&u).to_dense();
    let gram = t.form.gram() * &umat;
    ensure(&mut checks, "A u is symmetric", gram.is_symmetric(), "u is gamma-symmetric")?;
    let q_prime = QuadForm::new(gram)?;
    check_invariant(&t.module, &q_prime)?;
    ensure(&mut checks, "q' is G x G invariant", true, "g^T A u g = A u")?;
    let back = class_element(&t.form, &q_prime, &t.end, &t.gamma)?;
    ensure(&mut checks, "class element round trip", back == u, "A^-1 (A u) = u")?;

    let plain_equivalent = equivalent_global(&t.form, &q_prime)?;
    ensure(&mut checks, "q and q' are equivalent as plain forms", plain_equivalent, "rank, discriminant and Hasse invariants agree")?;
    let verdict = hp_verdict_with(&t.module, Some(&t.form), &t.end)?;
    ensure(
        &mut checks,
        "criterion does not apply",
        verdict.verdict == Verdict::NotGuaranteedByCriterion,
        verdict.summary(),
    )?;

    let cross_checks = json!({
        "plain_equivalent_global": plain_equivalent,
        "plain_invariants": { "q": t.form.invariants()?.to_json(), "q_prime": q_prime.invariants()?.to_json() },
        "hp_verdict": verdict.to_json(),
        "class_element": ce.u.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "radical": t.radical.certificate,
        "dimensions": t.provenance(),
    });

    Ok(CounterexampleReport {
        quaternions: [h1.clone(), h2.clone()],
        ram1: tc.ram1,
        ram2: tc.ram2,
        ram_q: tc.ram_q,
        hyperbolicity,
        local_table,
        global_certificate: ce.certificate,
        q: t.form,
        q_prime,
        plain_equivalent,
        verdict: verdict.verdict,
        cross_checks,
        checks,
    })
}

/// Every structural identity of the constructions for `h1`, `h2`, as pass/fail rows.
/// A failing stage is reported as a failed row and stops the run.
pub fn verify_identities(h1: &Quaternion, h2: &Quaternion) -> Vec<Check> {
    let mut rows = Vec::new();
    if let Err(e) = verify_rows(h1, h2, &mut rows) {
        if rows.last().is_none_or(|c| c.pass) {
            rows.push(Check { name: "construction".into(), pass: false, detail: e.to_string() });
        }
    }
    rows
}

fn verify_rows(h1: &Quaternion, h2: &Quaternion, rows: &mut Vec<Check>) -> Result<()> {
    let b1 = quaternion_bundle(h1)?;
    rows.extend(b1.checks.iter().cloned());
    let b2 = quaternion_bundle(h2)?;
    let t = tensor_pair(&b1, &b2)?;
    rows.extend(t.checks.iter().cloned());
    let (e, r, eb) = (t.end.dim(), t.radical.basis.len(), t.quotient.alg.dim());
    ensure(rows, "dim E = 400, dim R = 384, dim E / R = 16", (e, r, eb) == (400, 384, 16), format!("{e}, {r}, {eb}"))?;
    let kind = involution_kind(&t.quotient_inv)?;
    ensure(rows, "dim Sym(E / R) = 10", kind.sym_dim == 10, format!("{}", kind.kind))?;

    let v1 = hp_verdict_with(&b1.module, Some(&b1.form), &b1.end)?;
    ensure(rows, "criterion holds for N_H", v1.verdict == Verdict::Guaranteed, v1.summary())?;
    let vt = hp_verdict_with(&t.module, Some(&t.form), &t.end)?;
    ensure(rows, "criterion fails for N1 (x) N2", vt.verdict == Verdict::NotGuaranteedByCriterion, vt.summary())?;

    let tc = tensor_m2q(h1, h2)?;
    let union: BTreeSet<Place> = tc.ram1.union(&tc.ram2).cloned().collect();
    ensure(rows, "Ram(Q) is the union of the four places", tc.ram_q == union && union.len() == 4, format!("{:?}", place_names(&tc.ram_q)))?;
    let hyp = tc.ram_q.iter().map(|v| local_hyperbolicity(&t.quotient_inv, v, None)).collect::<Result<Vec<_>>>()?;
    ensure(rows, "involution hyperbolic at the ramified places", hyp.iter().all(|&h| h), format!("{} places", hyp.len()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_shape() {
        let (h, _) = default_pair();
        let m = build_n(&h).unwrap();
        assert_eq!(m.dim(), 8);
        assert_eq!(m.group_order(), 27);
    }

    #[test]
    fn quaternion_bundle_identities() {
        let (h, _) = default_pair();
        let b = quaternion_bundle(&h).unwrap();
        assert!(b.checks.iter().all(|c| c.pass));
        assert_eq!((b.end.dim(), b.radical.basis.len(), b.quotient.alg.dim()), (20, 16, 4));
        assert!(b.form.gram().is_symmetric());
    }

    #[test]
    fn sampled_places_skip_avoided() {
        let avoid: BTreeSet<Place> = [Place::finite(Poly::from_coeffs(&[1, 0, 1], 3)).unwrap()].into();
        let s = sample_places(3, 5, &avoid);
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|v| v.degree() >= 2 && !avoid.contains(v)));
    }
}
