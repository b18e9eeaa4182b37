use serde_json::{json, Value};

use super::components::{decompose_algebra, decompose_components, ComponentReport, Splitness};
use super::endo::{endomorphism_algebra, EndAlgebra};
use super::module::GModule;
use super::radical::{jacobson_radical, RadicalCertificate};
use crate::algebra::{InvolutionAlgebra, Quotient};
use crate::csa::InvolutionKind;
use crate::error::{Error, Result};
use crate::hermitian::induced_involution;
use crate::linalg::{Echelon, SparseVec};
use crate::quadform::QuadForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Guaranteed,
    NotGuaranteedByCriterion,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Guaranteed => "guaranteed",
            Verdict::NotGuaranteedByCriterion => "not-guaranteed-by-criterion",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerdictReport {
    pub verdict: Verdict,
    /// `order-prime-to-p`, `projective`, or `components`.
    pub path: &'static str,
    pub evidence: Value,
}

impl VerdictReport {
    pub fn to_json(&self) -> Value {
        json!({ "verdict": self.verdict.as_str(), "path": self.path, "evidence": self.evidence })
    }

    /// One-line summary such as `guaranteed (orthogonal split)`.
    pub fn summary(&self) -> String {
        let detail = match self.path {
            "order-prime-to-p" => "group order prime to p".to_string(),
            "projective" => "projective module".to_string(),
            _ => {
                let comps = self.evidence["components"]["components"].as_array().cloned().unwrap_or_default();
                let parts: Vec<String> = comps
                    .iter()
                    .map(|c| format!("{} {}", c["kind"].as_str().unwrap_or("component"), c["splitness"].as_str().unwrap_or("?")))
                    .collect();
                parts.join(", ")
            }
        };
        format!("{} ({detail})", self.verdict.as_str())
    }
}

/// Whether the module is projective: its restriction to the Sylow p-subgroup `P` is free,
/// i.e. `dim(V / J V) * |P| = dim V` where `J` is the augmentation ideal of `k[P]`.
pub fn is_projective(m: &GModule) -> Result<bool> {
    m.check()?;
    let p = m.prime();
    let n = m.dim();
    let sylow = m.sylow();
    let order: u128 = sylow.iter().map(|(_, o)| *o as u128).product();
    if order == 1 {
        return Ok(true);
    }
    if !(n as u128).is_multiple_of(order) {
        return Ok(false);
    }
    // J V is spanned by the columns of h - 1
    let mut ech = Echelon::new(p, n);
    for (h, _) in &sylow {
        let d = h - &crate::linalg::Matrix::identity(p, n);
        for c in 0..n {
            let col: SparseVec = (0..n).filter(|&r| !d[(r, c)].is_zero()).map(|r| (r, d[(r, c)].clone())).collect();
            if !col.is_empty() {
                ech.insert(&col);
            }
        }
    }
    let generators = (n - ech.rank()) as u128;
    Ok(generators * order == n as u128)
}

/// `E / R` with the involution induced by `gamma`.
pub fn quotient_with_involution(gamma: &InvolutionAlgebra, radical: &[crate::algebra::Elem]) -> Result<(Quotient, InvolutionAlgebra)> {
    let q = Quotient::new(&gamma.alg, radical)?;
    let bar = q.induced_involution(gamma)?;
    bar.verify(4096)?;
    if !bar.alg.check_associative(4096) {
        return Err(Error::cert("quotient structure constants are not associative"));
    }
    Ok((q, bar))
}

pub fn hp_verdict(m: &GModule, form: Option<&QuadForm>) -> Result<VerdictReport> {
    m.check()?;
    if let Some(r) = short_circuit(m)? {
        return Ok(r);
    }
    let end = endomorphism_algebra(m)?;
    hp_verdict_with(m, form, &end)
}

fn short_circuit(m: &GModule) -> Result<Option<VerdictReport>> {
    let p = m.prime() as u128;
    let order = m.group_order();
    if !order.is_multiple_of(p) {
        let evidence = json!({ "group_order": order.to_string(), "p": m.prime() });
        return Ok(Some(VerdictReport { verdict: Verdict::Guaranteed, path: "order-prime-to-p", evidence }));
    }
    if is_projective(m)? {
        let evidence = json!({ "group_order": order.to_string(), "dim": m.dim(), "projective": true });
        return Ok(Some(VerdictReport { verdict: Verdict::Guaranteed, path: "projective", evidence }));
    }
    Ok(None)
}

/// The criterion with a precomputed endomorphism algebra.
pub fn hp_verdict_with(m: &GModule, form: Option<&QuadForm>, end: &EndAlgebra) -> Result<VerdictReport> {
    if let Some(r) = short_circuit(m)? {
        return Ok(r);
    }
    let radical = jacobson_radical(&end.alg)?;
    let (report, has_form) = match form {
        Some(q) => {
            let gamma = induced_involution(m, q, end)?;
            let (_, bar) = quotient_with_involution(&gamma, &radical.basis)?;
            (decompose_components(&bar)?, true)
        }
        None => {
            let q = Quotient::new(&end.alg, &radical.basis)?;
            (decompose_algebra(&q.alg)?, false)
        }
    };
    let verdict = judge(&report, has_form);
    Ok(VerdictReport { verdict, path: "components", evidence: evidence(m, end, &radical.certificate, &report, has_form) })
}

fn judge(report: &ComponentReport, has_form: bool) -> Verdict {
    let ok = report.components.iter().all(|c| {
        // without a form every component could carry an orthogonal involution
        let relevant = !has_form || c.kind == Some(InvolutionKind::Orthogonal);
        !relevant || c.splitness == Splitness::Split
    });
    if ok {
        Verdict::Guaranteed
    } else {
        Verdict::NotGuaranteedByCriterion
    }
}

fn evidence(m: &GModule, end: &EndAlgebra, cert: &RadicalCertificate, report: &ComponentReport, has_form: bool) -> Value {
    json!({
        "group_order": m.group_order().to_string(),
        "dim": m.dim(),
        "projective": false,
        "end_dim": end.dim(),
        "radical": cert,
        "form_given": has_form,
        "components": report.to_json(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::RatFunc;
    use crate::linalg::Matrix;

    #[test]
    fn projectivity() {
        assert!(is_projective(&GModule::regular(3, 2)).unwrap());
        assert!(!is_projective(&GModule::trivial(3, 1, 1)).unwrap());
        assert!(!is_projective(&GModule::trivial(3, 9, 2)).unwrap());
        // two copies of the regular module
        let r = GModule::regular(3, 1);
        let two = Matrix::block2(&r.action[0], &Matrix::zeros(3, 3, 3), &Matrix::zeros(3, 3, 3), &r.action[0]);
        assert!(is_projective(&GModule::new(3, vec!["g".into()], vec![two]).unwrap()).unwrap());
    }

    #[test]
    fn trivial_module_with_unit_form() {
        let m = GModule::trivial(3, 1, 3);
        let q = QuadForm::diagonal(3, &[RatFunc::one(3)]);
        let r = hp_verdict(&m, Some(&q)).unwrap();
        assert_eq!(r.verdict, Verdict::Guaranteed);
        assert_eq!(r.path, "components");
        assert_eq!(r.summary(), "guaranteed (orthogonal split)");
    }

    #[test]
    fn order_prime_to_p() {
        let swap = Matrix::from_ints(3, &[&[0, 1], &[1, 0]]);
        let m = GModule::with_orders(3, vec!["s".into()], vec![swap], vec![2]).unwrap();
        let r = hp_verdict(&m, None).unwrap();
        assert_eq!((r.verdict, r.path), (Verdict::Guaranteed, "order-prime-to-p"));
    }

    #[test]
    fn free_module_short_circuits() {
        let r = hp_verdict(&GModule::regular(3, 3), None).unwrap();
        assert_eq!((r.verdict, r.path), (Verdict::Guaranteed, "projective"));
    }
}
