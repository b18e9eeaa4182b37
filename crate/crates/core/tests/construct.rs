use gform::construct::{counterexample_pipeline, default_pair, quaternion_bundle, tensor_pair, verify_identities};
use gform::grpalg::Verdict;

#[test]
fn tensor_pair_dimensions() {
    let (h1, h2) = default_pair();
    let t = tensor_pair(&quaternion_bundle(&h1).unwrap(), &quaternion_bundle(&h2).unwrap()).unwrap();
    assert_eq!(t.module.dim(), 64);
    assert_eq!(t.end.dim(), 400);
    assert_eq!(t.radical.basis.len(), 384);
    assert_eq!(t.quotient.alg.dim(), 16);
}

#[test]
fn pipeline_report() {
    let (h1, h2) = default_pair();
    let r = counterexample_pipeline(&h1, &h2, 5).unwrap();
    assert!(r.all_passed());
    assert!(r.plain_equivalent);
    assert_eq!(r.verdict, Verdict::NotGuaranteedByCriterion);
    assert_eq!(r.ram_q.len(), 4);
    assert_eq!(r.hyperbolicity.len(), 9);
    let again = counterexample_pipeline(&h1, &h2, 5).unwrap();
    assert_eq!(r.to_json().to_string(), again.to_json().to_string());
}

#[test]
fn verify_identities_rows_pass() {
    let (h1, h2) = default_pair();
    let rows = verify_identities(&h1, &h2);
    assert!(rows.iter().all(|c| c.pass), "{rows:?}");
}
