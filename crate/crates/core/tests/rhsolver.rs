use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qrh_core::bps::{doubled_a1, Charge, Ray};
use qrh_core::rhsolver::*;
use qrh_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn homogeneity_in_z_and_t() {
    let (z, tau, theta) = (c(1.1, 0.4), c(0.2, 0.9), c(0.15, -0.1));
    let rot = Complex64::from_polar(1.0, 1.1);
    for side in [Side::Plus, Side::Minus] {
        for n in [-2, 1, 3] {
            let t = c(0.5, 0.3) * side.sign();
            let a = solve_a1(z, &EvaluationPoint::new(t, side, tau, theta), n).unwrap();
            let b = solve_a1(z * rot, &EvaluationPoint::new(t * rot, side, tau, theta), n).unwrap();
            assert!((a / b - 1.0).norm() < 1e-13);
        }
        let r1 = verify_limits_a1(z, side, tau, theta, None).unwrap();
        let r2 = verify_limits_a1(z * rot, side, tau, theta, None).unwrap();
        for (x, y) in r1.zero_limit_profile.iter().zip(&r2.zero_limit_profile) {
            assert!((x - y).abs() <= 1e-12 + 1e-6 * x);
        }
    }
}

#[test]
fn limits_report_is_monotone_and_small() {
    let r = verify_limits_a1(c(0.7, -1.2), Side::Minus, c(-0.3, 0.6), c(0.4, 0.2), None).unwrap();
    assert!(r.monotone_tail);
    assert!(r.zero_limit_residual < 1e-6);
    assert!(r.growth_exponent.is_finite() && r.growth_exponent <= 5.0);
}

#[test]
fn predicted_pole_is_signalled() {
    let (z, tau, theta) = (c(1.0, 0.5), c(0.1, 0.8), c(0.2, 0.05));
    let t = predicted_singularity(z, tau, theta, -2);
    let err = solve_a1(z, &EvaluationPoint::new(t, Side::Plus, tau, theta), 1).unwrap_err();
    assert!(err.is_singular());
    let t = predicted_singularity(z, tau, theta, 1);
    let v = solve_a1(z, &EvaluationPoint::new(t * (1.0 + 1e-7), Side::Minus, tau, theta), 1).unwrap();
    assert!(v.norm() < 1e-5);
}

#[test]
fn located_singularities_match_prediction() {
    let (z, tau, theta) = (c(-0.6, 1.4), c(-0.4, 1.1), c(-0.1, 0.3));
    for n in -3..=3 {
        let tn = predicted_singularity(z, tau, theta, n);
        let (side, kind) = singularity_kind(n);
        let found = locate_singularity(z, side, tau, theta, tn * c(1.0, 2e-3), kind).unwrap();
        assert!((found - tn).norm() < 1e-8 * tn.norm(), "n = {n}");
    }
}

#[test]
fn jump_identity_rejects_active_rays() {
    let z = c(1.0, 1.0);
    assert!(matches!(verify_jump_a1(z, z * c(0.0, 2.0), c(0.0, 1.0), c(0.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(verify_jump_a1(z, c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)), Err(Error::InvalidArgument(_))));
    assert!(matches!(verify_jump_a1(z, c(0.3, 0.0), c(0.0, -1.0), c(0.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn general_solution_rejects_bad_rays() {
    let z = c(1.0, 0.0);
    let inst = RHInstance::new(doubled_a1(z).unwrap()).unwrap();
    let beta = Charge(vec![0, 1]);
    let tau = c(0.0, 1.0);
    // boundary of i H_r contains Z(alpha)
    let r = Ray::direction(c(1.0, 0.0)).unwrap();
    assert!(matches!(
        log_solve_general(&inst, &r, c(1.0, 0.0), tau, &[c(0.0, 0.0)], &beta),
        Err(Error::InvalidArgument(_))
    ));
    // t outside H_r
    let r = Ray::direction(c(1.0, 1.0)).unwrap();
    assert!(matches!(log_solve_general(&inst, &r, c(-1.0, 0.0), tau, &[c(0.0, 0.0)], &beta), Err(Error::Domain(_))));
    assert!(matches!(log_solve_general(&inst, &r, c(1.0, 0.0), tau, &[], &beta), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn general_sheets_cover_both_a1_sides() {
    let z = c(0.9, -0.3);
    let inst = RHInstance::new(doubled_a1(z).unwrap()).unwrap();
    let (tau, theta) = (c(0.3, 0.7), c(0.1, 0.2));
    let beta = Charge(vec![0, 1]);
    for (phase, side) in [(z * c(0.0, -1.0), Side::Plus), (z * c(0.0, 1.0), Side::Minus)] {
        let r = Ray::direction(phase * Complex64::from_polar(1.0, 0.2)).unwrap();
        let t = r.phase * 0.8;
        let g = solve_general(&inst, &r, t, tau, &[theta], &beta).unwrap();
        let a = solve_a1(z, &EvaluationPoint::new(t, side, tau, theta), 1).unwrap();
        assert!((g / a - 1.0).norm() < 1e-13);
        // adjoint form on the same sheet
        let psi = adjoint_general(&inst, &r, t, tau, &[theta]).unwrap();
        let psi_a1 = adjoint_psi_a1(z, &EvaluationPoint::new(t, side, tau, theta)).unwrap();
        assert!((psi / psi_a1 - 1.0).norm() < 1e-12);
    }
}

#[test]
fn tau_limit_identity_without_the_twelfth_root() {
    let (z, t, theta) = (c(0.4, 1.0), c(0.3, -0.2), c(0.1, 0.05));
    for side in [Side::Plus, Side::Minus] {
        let l = tau_function_limit(z, t * side.sign(), theta, side).unwrap();
        assert!((l.psi_limit / l.upsilon - 1.0).norm() < 1e-12);
        // the w^{-1/12} factor is not there
        assert!((l.psi_limit / l.scaled_upsilon - 1.0).norm() > 1e-3);
    }
}

#[test]
fn hamiltonian_limit_matches_extrapolation() {
    let (z, theta) = (c(1.0, 0.0), c(0.1, -0.05));
    let t = z / (c(0.0, 2.0 * PI) * c(0.8, 0.5));
    let closed = hamiltonian_limit(z, t, theta, Side::Plus).unwrap();
    let extrapolated = hamiltonian_extrapolated(z, t, theta, Side::Plus, &ExtrapolationConfig::default()).unwrap();
    assert!((closed - extrapolated).norm() < 1e-6);
    let d = hamiltonian_derivative(z, t, theta, Side::Plus, 1e-4).unwrap();
    let want = hamiltonian_derivative_closed(z, t, theta, Side::Plus).unwrap();
    assert!((d - want).norm() < 1e-6);
}

#[test]
fn richardson_removes_leading_error_terms() {
    let f = |h: f64| c(2.0 + 3.0 * h - h * h + 0.5 * h * h * h, 0.0);
    let vals: Vec<Complex64> = (0..4).map(|j| f(0.5f64.powi(j))).collect();
    assert!((richardson(&vals) - 2.0).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jump_identity_holds(
        zr in 0.5f64..2.0, za in -PI..PI,
        tr in 0.1f64..10.0, ta in -PI..PI,
        tau_re in -1.0f64..1.0, tau_im in 0.3f64..1.5,
        th_re in -0.7f64..0.7, th_im in -0.7f64..0.7,
    ) {
        let z = Complex64::from_polar(zr, za);
        let t = Complex64::from_polar(tr, ta);
        prop_assume!((t / z).re.abs() > 1e-6 * (t / z).norm());
        let (tau, theta) = (c(tau_re, tau_im), c(th_re, th_im));
        let u = w_of(z, t) + 0.5 - theta - tau / 2.0;
        prop_assume!((u - u.re.round()).norm() > 1e-3);
        prop_assert!(verify_jump_a1(z, t, tau, theta).unwrap() < 1e-9);
    }

    #[test]
    fn negative_powers_invert(
        tr in 0.2f64..5.0, ta in -1.2f64..1.2, n in 1i64..4,
    ) {
        let z = c(0.7, 0.7);
        let (tau, theta) = (c(0.1, 0.9), c(0.05, 0.1));
        let t = z * Complex64::from_polar(tr, ta);
        let p = EvaluationPoint::new(t, Side::Plus, tau, theta);
        // y_{n} y_{-n} = K_n(theta) K_{-n}(theta + n tau)
        let shifted = EvaluationPoint::new(t, Side::Plus, tau, theta + tau * n as f64);
        let prod = solve_a1(z, &p, n).unwrap() * solve_a1(z, &shifted, -n).unwrap();
        prop_assert!((prod - 1.0).norm() < 1e-11);
    }
}
