use gform::algebra::flatten;
use gform::construct::{default_pair, quaternion_bundle, tensor_pair};
use gform::grpalg::commutant_basis;
use gform::linalg::Echelon;

/// The direct commutant of `N1 (x) N2` and the span of Kronecker products coincide.
#[test]
fn direct_commutant_matches_tensor_basis() {
    let (h1, h2) = default_pair();
    let t = tensor_pair(&quaternion_bundle(&h1).unwrap(), &quaternion_bundle(&h2).unwrap()).unwrap();
    let start = std::time::Instant::now();
    let direct = commutant_basis(&t.module);
    eprintln!("commutant solve: {:?}", start.elapsed());
    assert_eq!(direct.len(), 400);
    let mut ech = Echelon::new(3, 64 * 64);
    for x in &direct {
        ech.insert(&flatten(x));
    }
    assert!(t.end.basis.iter().all(|x| ech.contains(&flatten(x))));
}
