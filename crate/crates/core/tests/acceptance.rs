//! Acceptance criteria, one line each. Runs without the libtest harness so every line is printed.

mod common;

use std::collections::BTreeSet;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gform::construct::{counterexample_pipeline, default_pair, quaternion_bundle, sample_places, tensor_pair};
use gform::csa::{involution_kind, InvolutionKind};
use gform::funcfield::{hilbert_symbol, parse_place, support, Place, RatFunc};
use gform::grpalg::{certify_radical, hp_verdict, hp_verdict_with, jacobson_radical, endomorphism_algebra, GModule, Verdict};
use gform::hermitian::local_hyperbolicity;
use gform::linalg::Matrix;
use gform::quadform::{equivalent_global, QuadForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{isotropic_by_lifting, random_ratfunc};

const P: u32 = 3;

fn places(names: &[&str]) -> BTreeSet<Place> {
    names.iter().map(|s| parse_place(s, P).unwrap()).collect()
}

fn product_formula() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut places_seen = 0;
    for _ in 0..200 {
        let (a, b) = (random_ratfunc(&mut rng, 3, P), random_ratfunc(&mut rng, 3, P));
        let s = support(&a, &b).unwrap();
        places_seen += s.len();
        let prod: i8 = s.iter().map(|v| hilbert_symbol(&a, &b, v).unwrap()).product();
        assert_eq!(prod, 1, "({a}, {b})");
    }
    format!("200 pairs, {places_seen} symbols")
}

fn lifting_oracle() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let minus_one = RatFunc::constant(-1, P);
    let (mut checked, mut anisotropic) = (0, 0);
    for _ in 0..60 {
        let (a, b) = (random_ratfunc(&mut rng, 2, P), random_ratfunc(&mut rng, 2, P));
        for v in support(&a, &b).unwrap() {
            let iso = isotropic_by_lifting(&[a.clone(), b.clone(), minus_one.clone()], &v);
            assert_eq!(hilbert_symbol(&a, &b, &v).unwrap() == 1, iso, "({a}, {b}) at {v}");
            checked += 1;
            anisotropic += (!iso) as usize;
        }
    }
    assert!(anisotropic > 0 && anisotropic < checked);
    format!("60 pairs, {checked} places, {anisotropic} anisotropic")
}

fn random_gram(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::zeros(P, n, n);
        for i in 0..n {
            for j in i..n {
                let x = if rng.gen_bool(0.6) { random_ratfunc(rng, 1, P) } else { RatFunc::zero(P) };
                m[(i, j)] = x.clone();
                m[(j, i)] = x;
            }
        }
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(P, n, n, |_, _| if rng.gen_bool(0.5) { random_ratfunc(rng, 1, P) } else { RatFunc::zero(P) });
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn hasse_minkowski() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let n = rng.gen_range(1..=5);
        let q = QuadForm::new(random_gram(&mut rng, n)).unwrap();
        let pm = random_invertible(&mut rng, n);
        assert!(equivalent_global(&q, &q.transform(&pm)).unwrap());
    }
    for _ in 0..25 {
        let n = rng.gen_range(1..=5);
        let entries: Vec<RatFunc> = (0..n).map(|_| random_ratfunc(&mut rng, 2, P)).collect();
        let mut other = entries.clone();
        // t is never a square, so the discriminant changes
        other[0] = &other[0] * &RatFunc::t(P);
        let (q, q2) = (QuadForm::diagonal(P, &entries), QuadForm::diagonal(P, &other));
        assert_ne!(q.disc().unwrap(), q2.disc().unwrap());
        assert!(!equivalent_global(&q, &q2).unwrap());
    }
    "25 congruent pairs, 25 discriminant changes".into()
}

fn structure_of_en() -> String {
    let (h, _) = default_pair();
    let b = quaternion_bundle(&h).unwrap();
    assert_eq!(b.module.dim(), 8);
    assert_eq!(b.end.dim(), 20);
    assert_eq!(b.radical.basis.len(), 16);
    let hop = h.algebra(true);
    for x in 0..4 {
        for y in 0..4 {
            assert_eq!(b.quotient.alg.product(x, y), hop.product(x, y));
        }
    }
    "dim N = 8, dim E_N = 20, dim R_N = 16, E_N / R_N = H^op".into()
}

fn form_identities() -> String {
    let (h, _) = default_pair();
    let b = quaternion_bundle(&h).unwrap();
    let a = b.form.gram();
    assert!(a.is_symmetric());
    let alpha = a.block(0, 4, 4, 4);
    assert!(alpha.is_skew());
    for g in &b.module.action {
        assert_eq!(&(&g.transpose() * a) * g, *a);
    }
    // canonical involution on 1, i, j, ij: fixes 1, negates the rest
    for r in 0..4 {
        let e: Vec<RatFunc> = (0..4).map(|k| RatFunc::constant((k == r) as i64, P)).collect();
        let img = b.quotient_inv.apply(&e);
        let sign = if r == 0 { 1 } else { -1 };
        assert_eq!(img, e.iter().map(|x| x * &RatFunc::constant(sign, P)).collect::<Vec<_>>());
    }
    let names = ["rho(a_1) = a_1", "rho(a_2) = a_2", "rho(a_3) = a_3", "rho is symplectic", "alpha^T = -alpha"];
    for n in names {
        assert!(b.checks.iter().any(|c| c.name == n && c.pass), "{n}");
    }
    "rho(a_m) = a_m, Sym(rho) = 6, alpha skew, A symmetric and invariant, canonical quotient involution".into()
}

fn tensor_structure() -> String {
    let (h1, h2) = default_pair();
    let t = tensor_pair(&quaternion_bundle(&h1).unwrap(), &quaternion_bundle(&h2).unwrap()).unwrap();
    assert_eq!(t.end.dim(), 400);
    assert_eq!(t.quotient.alg.dim(), 16);
    let k = involution_kind(&t.quotient_inv).unwrap();
    assert_eq!((k.kind, k.sym_dim), (InvolutionKind::Orthogonal, 10));
    assert!(t.checks.iter().any(|c| c.name == "E1 (x) E2 is the whole commutant" && c.pass));
    "dim E = 400 (tensor basis = direct commutant), dim E / R = 16, orthogonal with Sym = 10".into()
}

fn ramification() -> String {
    let (h1, h2) = default_pair();
    assert_eq!(h1.ramification_set().unwrap(), places(&["t", "inf"]));
    assert_eq!(h2.ramification_set().unwrap(), places(&["t+2", "t+1"]));
    let r = gform::csa::tensor_m2q(&h1, &h2).unwrap();
    assert_eq!(r.ram_q, places(&["t", "inf", "t+1", "t+2"]));
    "Ram(-1, t) = {t, inf}, Ram(-1, (t-1)(t-2)) = {t-1, t-2}, Ram(Q) = union".into()
}

fn hyperbolicity() -> String {
    let (h1, h2) = default_pair();
    let t = tensor_pair(&quaternion_bundle(&h1).unwrap(), &quaternion_bundle(&h2).unwrap()).unwrap();
    let ram = places(&["t", "inf", "t+1", "t+2"]);
    let sampled = sample_places(P, 6, &ram);
    for v in ram.iter().chain(&sampled) {
        assert!(local_hyperbolicity(&t.quotient_inv, v, None).unwrap(), "{v}");
    }
    format!("4 ramified places and {} sampled places of degree >= 2", sampled.len())
}

fn counterexample() -> String {
    let (h1, h2) = default_pair();
    let r = counterexample_pipeline(&h1, &h2, 5).unwrap();
    assert!(r.all_passed());
    assert_eq!(r.local_table.len(), 4);
    assert!(r.local_table.iter().all(|row| row["equal"] == true));
    assert_eq!(r.global_certificate["differs"], true);
    assert_ne!(r.global_certificate["value_u"], r.global_certificate["value_1"]);
    assert!(r.plain_equivalent);
    assert!(equivalent_global(&r.q, &r.q_prime).unwrap());
    assert_eq!(r.verdict, Verdict::NotGuaranteedByCriterion);
    format!("local records equal at 4 places, Clifford pairs {} vs {}, plain forms equivalent", r.global_certificate["value_u"], r.global_certificate["value_1"])
}

fn verdicts() -> String {
    let one = QuadForm::diagonal(P, &[RatFunc::one(P)]);
    let triv = hp_verdict(&GModule::trivial(P, 1, 2), Some(&one)).unwrap();
    assert_eq!(triv.verdict, Verdict::Guaranteed);
    assert_eq!(triv.summary(), "guaranteed (orthogonal split)");

    let (h1, h2) = default_pair();
    let b1 = quaternion_bundle(&h1).unwrap();
    let nh = hp_verdict_with(&b1.module, Some(&b1.form), &b1.end).unwrap();
    assert_eq!(nh.verdict, Verdict::Guaranteed);
    assert!(nh.evidence["components"]["components"].as_array().unwrap().iter().all(|c| c["kind"] == "symplectic"));

    let free = hp_verdict(&GModule::regular(P, 2), None).unwrap();
    assert_eq!((free.verdict, free.path), (Verdict::Guaranteed, "projective"));

    let swap = Matrix::from_ints(P, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let coprime = GModule::with_orders(P, vec!["s".into()], vec![swap], vec![2]).unwrap();
    let c = hp_verdict(&coprime, None).unwrap();
    assert_eq!((c.verdict, c.path), (Verdict::Guaranteed, "order-prime-to-p"));

    let t = tensor_pair(&b1, &quaternion_bundle(&h2).unwrap()).unwrap();
    let tv = hp_verdict_with(&t.module, Some(&t.form), &t.end).unwrap();
    assert_eq!(tv.verdict, Verdict::NotGuaranteedByCriterion);
    format!("trivial, N_H, free, coprime guaranteed; tensor: {}", tv.summary())
}

fn radicals() -> String {
    let (h1, h2) = default_pair();
    let b1 = quaternion_bundle(&h1).unwrap();
    let b2 = quaternion_bundle(&h2).unwrap();
    let t = tensor_pair(&b1, &b2).unwrap();
    let mut dims = Vec::new();
    for b in [&b1, &b2, &t] {
        let c = certify_radical(&b.end.alg, &b.radical.basis).unwrap();
        assert!(c.nilpotency_index <= c.algebra_dim);
        assert_eq!(c.quotient_radical_dim, 0);
        dims.push(format!("{}/{}", c.radical_dim, c.algebra_dim));
    }
    // the radical of E_N is the block of matrices [[0, y], [0, 0]]
    for x in &b1.radical.basis {
        let m = b1.end.matrix_of(x).to_dense();
        assert!(m.block(0, 0, 4, 4).is_zero() && m.block(4, 0, 4, 8).is_zero());
    }
    // k[C_3]: the augmentation ideal
    let e = endomorphism_algebra(&GModule::regular(P, 1)).unwrap();
    let r = jacobson_radical(&e.alg).unwrap();
    assert_eq!(r.basis.len(), 2);
    for x in &r.basis {
        let m = e.matrix_of(x).to_dense();
        for c in 0..3 {
            assert!(m.column(c).iter().fold(RatFunc::zero(P), |a, b| &a + b).is_zero());
        }
    }
    format!("radical/algebra dims {}; block ideal and augmentation ideal reproduced", dims.join(", "))
}

type Criterion = (&'static str, Duration, fn() -> String);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("Hilbert product formula", secs(5), product_formula),
        ("local symbol vs lifting oracle", secs(30), lifting_oracle),
        ("Hasse-Minkowski sanity", secs(10), hasse_minkowski),
        ("structure of E_N", secs(60), structure_of_en),
        ("form and involution identities", secs(60), form_identities),
        ("tensor construction", secs(15 * 60), tensor_structure),
        ("ramification sets", secs(5), ramification),
        ("local hyperbolicity", secs(60), hyperbolicity),
        ("counterexample end state", secs(20 * 60), counterexample),
        ("criterion verdicts", secs(5 * 60), verdicts),
        ("radical certificates", secs(60), radicals),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(f);
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the time limit")),
            Err(_) => ("FAIL", "assertion failed (see above)".into()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name} [{:.2}s / {}s] {detail}", i + 1, elapsed.as_secs_f64(), limit.as_secs());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
