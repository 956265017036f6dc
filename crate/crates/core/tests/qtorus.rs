use num_complex::Complex64;
use proptest::prelude::*;
use qrh_core::bps::{canonical_refinement, doubled_a1, em_splitting, Charge, RefinedBPSStructure};
use qrh_core::qtorus::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn form() -> Vec<Vec<i64>> {
    vec![vec![0, -1], vec![1, 0]]
}

fn arb_element() -> impl Strategy<Value = QuantumTorusElement> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), -2i32..=2, -3i32..=3), 1..4).prop_map(|terms| {
        let mut x = QuantumTorusElement::zero();
        for ((a, b), k, v) in terms {
            x.add_term(Charge(vec![a, b]), &LaurentQ::monomial(k, c(v as f64, 0.0)));
        }
        x
    })
}

fn setup() -> (RefinedBPSStructure, ExtendedAlgebra) {
    let b = doubled_a1(c(0.8, -0.4)).unwrap();
    let s = em_splitting(&b, None).unwrap();
    let alg = ExtendedAlgebra::new(&b, &s).unwrap();
    (b, alg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torus_product_is_associative(a in arb_element(), b in arb_element(), d in arb_element()) {
        let f = form();
        let left = qt_mul(&qt_mul(&a, &b, &f).unwrap(), &d, &f).unwrap();
        let right = qt_mul(&a, &qt_mul(&b, &d, &f).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn embedding_is_multiplicative(a in arb_element(), b in arb_element()) {
        let (bps, alg) = setup();
        let pts = sample_points(1, 6, 11);
        let lhs = alg.embed(&qt_mul(&a, &b, bps.skew_form()).unwrap()).unwrap();
        let rhs = alg.mul(&alg.embed(&a).unwrap(), &alg.embed(&b).unwrap()).unwrap();
        prop_assert!(max_element_difference(&lhs, &rhs, &pts).unwrap() < 1e-9);
    }
}

#[test]
fn generators_satisfy_twisted_relation() {
    let f = form();
    let x = QuantumTorusElement::generator(Charge(vec![1, 0]));
    let y = QuantumTorusElement::generator(Charge(vec![0, 1]));
    let xy = qt_mul(&x, &y, &f).unwrap();
    let yx = qt_mul(&y, &x, &f).unwrap();
    // y_a y_b = q^{<a,b>/2} y_{a+b}
    assert_eq!(xy.coeff(&Charge(vec![1, 1])), LaurentQ::monomial(-1, c(1.0, 0.0)));
    assert_eq!(yx.coeff(&Charge(vec![1, 1])), LaurentQ::monomial(1, c(1.0, 0.0)));
}

#[test]
fn degree_zero_elements_commute() {
    let (_, alg) = setup();
    let tau = CoefficientFunction::tau();
    let th = CoefficientFunction::theta(vec![1]);
    let a = ExtendedElement::scalar(1, (&th * &tau).exp());
    let b = ExtendedElement::scalar(1, &th + &CoefficientFunction::real(2.0));
    let pts = sample_points(1, 8, 2);
    let d = max_element_difference(&alg.mul(&a, &b).unwrap(), &alg.mul(&b, &a).unwrap(), &pts).unwrap();
    assert!(d < 1e-14);
    assert!(alg.mul(&a, &b).unwrap().is_degree_zero());
}

#[test]
fn automorphisms_respect_products() {
    let (b, alg) = setup();
    let s = em_splitting(&b, None).unwrap();
    let sigma = canonical_refinement(&b).unwrap();
    let rays = qrh_core::bps::active_rays(&b).unwrap();
    let pts = sample_points(1, 8, 5);
    let x = alg.embed(&QuantumTorusElement::generator(Charge(vec![1, 1]))).unwrap();
    let y = alg.embed(&QuantumTorusElement::generator(Charge(vec![-1, 2]))).unwrap();
    let autos = [
        s_q_ray(&b, &s, &sigma, &rays[1]).unwrap(),
        eps_z(&b, &s, c(0.4, 0.9)).unwrap(),
        ad(
            &CoefficientFunction::lambda(
                &CoefficientFunction::constant(c(1.3, 0.2)),
                &CoefficientFunction::theta(vec![1]),
                &CoefficientFunction::one(),
            ),
            &alg,
        ),
    ];
    for a in &autos {
        let lhs = a.apply(&alg, &alg.mul(&x, &y).unwrap()).unwrap();
        let rhs = alg.mul(&a.apply(&alg, &x).unwrap(), &a.apply(&alg, &y).unwrap()).unwrap();
        assert!(max_element_difference(&lhs, &rhs, &pts).unwrap() < 1e-10);
    }
}

#[test]
fn inverse_and_composition() {
    let (b, alg) = setup();
    let s = em_splitting(&b, None).unwrap();
    let sigma = canonical_refinement(&b).unwrap();
    let rays = qrh_core::bps::active_rays(&b).unwrap();
    let pts = sample_points(1, 8, 9);
    let x = alg.embed(&QuantumTorusElement::generator(Charge(vec![1, -2]))).unwrap();
    for a in [s_q_ray(&b, &s, &sigma, &rays[0]).unwrap(), eps_z(&b, &s, c(-0.7, 0.3)).unwrap()] {
        let id = a.compose(&a.inverse(&alg).unwrap(), &alg).unwrap();
        let back = id.apply(&alg, &x).unwrap();
        assert!(max_element_difference(&back, &x, &pts).unwrap() < 1e-12);
    }
    // S_q on opposite rays: the two factors are inverse to each other up to the q-shift
    let plus = s_q_ray(&b, &s, &sigma, &rays[1]).unwrap();
    let minus = s_q_ray(&b, &s, &sigma, &rays[0]).unwrap();
    let both = plus.compose(&minus, &alg).unwrap();
    let direct = minus.compose(&plus, &alg).unwrap();
    let y = alg.embed(&QuantumTorusElement::generator(Charge(vec![0, 1]))).unwrap();
    let d = max_element_difference(&both.apply(&alg, &y).unwrap(), &direct.apply(&alg, &y).unwrap(), &pts).unwrap();
    assert!(d < 1e-12, "automorphisms of one ray line commute: {d}");
}

#[test]
fn s_q_agrees_with_quantum_dilog_conjugation() {
    let (b, alg) = setup();
    let s = em_splitting(&b, None).unwrap();
    let sigma = canonical_refinement(&b).unwrap();
    for ray in qrh_core::bps::active_rays(&b).unwrap() {
        let a = s_q_ray(&b, &s, &sigma, &ray).unwrap();
        for p in sample_points(1, 10, 4) {
            let got = a.generators[0].eval(p.tau, &p.theta).unwrap();
            let want = dt_adjoint_multiplier(&b, &alg, &ray, 0, p.tau, &p.theta).unwrap();
            assert!((got / want - 1.0).norm() < 1e-11);
        }
    }
}

#[test]
fn automorphism_json_round_trip() {
    let (b, _) = setup();
    let s = em_splitting(&b, None).unwrap();
    let a = eps_z(&b, &s, c(0.2, -1.1)).unwrap();
    let text = serde_json::to_string(&a).unwrap();
    let back: GradedAutomorphism = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
}

#[test]
fn s_q_requires_matching_refinement() {
    let (b, _) = setup();
    let s = em_splitting(&b, None).unwrap();
    let wrong = qrh_core::bps::QuadraticRefinement::from_basis_signs(&b, vec![1, 1]).unwrap();
    let rays = qrh_core::bps::active_rays(&b).unwrap();
    assert!(matches!(s_q_ray(&b, &s, &wrong, &rays[0]), Err(qrh_core::Error::Inconsistent(_))));
}
