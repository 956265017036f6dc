use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use qrh_core::bernoulli::{
    bernoulli_number, bernoulli_number_exact, classical_bernoulli, multi_bernoulli, MultiBernoulliQuery,
};
use qrh_core::special::*;
use qrh_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const GLAISHER: f64 = 1.282_427_129_100_622_6;

/// Akiyama-Tanigawa, giving `B_1 = +1/2`.
fn akiyama_tanigawa(n: usize) -> Ratio<BigInt> {
    let mut a: Vec<Ratio<BigInt>> = Vec::new();
    for m in 0..=n {
        a.push(Ratio::new(BigInt::from(1), BigInt::from(m as i64 + 1)));
        for j in (1..=m).rev() {
            let diff = a[j - 1].clone() - a[j].clone();
            a[j - 1] = diff * Ratio::from_integer(BigInt::from(j as i64));
        }
    }
    a[0].clone()
}

#[test]
fn bernoulli_numbers_match_akiyama_tanigawa() {
    for n in [0, 2, 4, 10, 20, 30, 40] {
        assert_eq!(bernoulli_number_exact(n), akiyama_tanigawa(n), "B_{n}");
    }
    assert_eq!(bernoulli_number(1), -0.5);
}

#[test]
fn multi_bernoulli_with_one_parameter_rescales_classical() {
    let (x, a) = (c(0.3, -0.7), c(1.5, 0.4));
    for k in 0..6 {
        let got = multi_bernoulli(&MultiBernoulliQuery::new(k, x, vec![a])).unwrap();
        let want = a.powi(k as i32 - 1) * classical_bernoulli(k, x / a);
        assert!((got - want).norm() < 1e-13 * (1.0 + want.norm()), "k = {k}");
    }
}

#[test]
fn lambda_from_gamma_values() {
    // Gamma(3) = 2
    let v = lambda_fn(&ModifiedGammaArgs::new(c(2.0, 0.0), ONE, ONE)).unwrap();
    let want = 2.0 * 2f64.exp() * 2f64.powf(-2.5) / (2.0 * PI).sqrt();
    assert!((v - want).norm() < 1e-14);
}

#[test]
fn log_lambda_keeps_precision_at_huge_w() {
    // log Lambda ~ B_2(eta)/(2w) is tiny here; the absolute error must stay at the ulp level
    for w in [c(1e7, 3e6), c(0.0, -2e8), c(-4e6, 9e6)] {
        let eta = c(0.7, -0.4);
        let got = log_lambda(&ModifiedGammaArgs::new(w, eta, ONE)).unwrap();
        let want = asymptotic_log_lambda(w, eta, ONE, 3).unwrap();
        assert!((got - want).norm() < 1e-15, "w = {w}: {got} vs {want}");
    }
}

#[test]
fn barnes_g_at_one_half() {
    // G(1/2) = 2^{1/24} e^{1/8} pi^{-1/4} A^{-3/2}
    let want = 2f64.ln() / 24.0 + 0.125 - PI.ln() / 4.0 - 1.5 * GLAISHER.ln();
    let got = log_barnes_g(c(0.5, 0.0)).unwrap();
    assert!((got - want).norm() < 1e-13);
}

#[test]
fn zeta_prime_against_glaisher() {
    assert!((zeta_prime_minus_one() - (1.0 / 12.0 - GLAISHER.ln())).abs() < 1e-14);
    let k = constants();
    assert!((k.rho - (2.0 * PI).sqrt() * (GLAISHER.ln() - 1.0 / 12.0).exp()).abs() < 1e-13);
}

#[test]
fn barnes_zeta_two_unit_parameters() {
    // zeta_2(s, 1 | 1, 1) = zeta(s - 1)
    let v = barnes_zeta(c(3.0, 0.0), ONE, &[ONE, ONE]).unwrap();
    assert!((v - PI * PI / 6.0).norm() < 1e-12);
    let v = barnes_zeta(c(4.0, 0.0), ONE, &[ONE, ONE]).unwrap();
    assert!((v - 1.202_056_903_159_594_3).norm() < 1e-12);
}

#[test]
fn quantum_dilog_against_truncated_product() {
    for (q, x) in [(c(0.3, 0.2), c(1.5, -0.5)), (c(-0.5, 0.1), c(0.2, 2.0)), (c(0.0, 0.6), c(-3.0, 0.0))] {
        let mut prod = ONE;
        let mut qk = ONE;
        for _ in 0..400 {
            prod *= ONE - qk * x;
            qk *= q;
        }
        let got = quantum_dilog(&QDilogArgs { q, x }).unwrap();
        assert!((got - prod).norm() < 1e-13 * (1.0 + prod.norm()));
    }
}

#[test]
fn f_difference_for_small_tau() {
    // log F at tau ~ 0.002 needs the full Gamma_2 asymptotic tail
    let tau = c(0.0, 0.002);
    for (w, eta) in [(c(0.8, 0.3), c(0.5, 0.001)), (c(1.3, -0.6), c(0.4, -0.1))] {
        let a = log_f(&DoubleGammaArgs { w, eta: eta + tau, omega1: ONE, omega2: tau }).unwrap();
        let b = log_f(&DoubleGammaArgs { w, eta, omega1: ONE, omega2: tau }).unwrap();
        let l = log_lambda(&ModifiedGammaArgs::new(w, eta, ONE)).unwrap();
        let d = a - b + l;
        let k = (d.im / (2.0 * PI)).round();
        assert!((d - c(0.0, 2.0 * PI * k)).norm() < 1e-9, "w = {w}: {d}");
    }
}

#[test]
fn gamma2_difference_in_each_parameter() {
    // Gamma_2(x + w_i) = Gamma_2(x) / Gamma_1(x | w_j)
    let (x, w1, w2) = (c(1.2, 0.7), c(1.0, 0.1), c(0.6, 0.9));
    let base = log_gamma2(x, w1, w2).unwrap();
    for (wi, wj) in [(w1, w2), (w2, w1)] {
        let d = log_gamma2(x + wi, w1, w2).unwrap() - base + log_gamma1(x, wj).unwrap();
        let k = (d.im / (2.0 * PI)).round();
        assert!((d - c(0.0, 2.0 * PI * k)).norm() < 1e-11);
    }
}

#[test]
fn gamma_poles_are_signalled() {
    assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
    assert!(matches!(log_lambda(&ModifiedGammaArgs::new(c(0.5, 0.0), c(-2.5, 0.0), ONE)), Err(Error::Pole { .. })));
}

#[test]
fn delta_and_upsilon_reject_the_cut() {
    assert!(matches!(log_delta(c(-1.0, 0.0), ONE), Err(Error::Domain(_))));
    assert!(matches!(log_upsilon(c(0.0, 0.0), ONE), Err(Error::Domain(_))));
}
