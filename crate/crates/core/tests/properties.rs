use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qrh_core::special::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reduce(d: Complex64) -> f64 {
    let k = (d.im / (2.0 * PI)).round();
    (d - c(0.0, 2.0 * PI * k)).norm()
}

fn arb_c(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lambda_recurrence(w in arb_c(3.0), eta in arb_c(1.5)) {
        // Lambda(w, eta + 1 | 1) = (w + eta)/w Lambda(w, eta | 1)
        prop_assume!(!(w.im.abs() < 1e-3 && w.re < 0.0) && w.norm() > 0.1);
        let u = w + eta;
        prop_assume!((u - u.re.round().min(0.0)).norm() > 1e-3);
        let a = log_lambda(&ModifiedGammaArgs::new(w, eta + 1.0, c(1.0, 0.0))).unwrap();
        let b = log_lambda(&ModifiedGammaArgs::new(w, eta, c(1.0, 0.0))).unwrap();
        prop_assert!(reduce(a - b - u.ln() + w.ln()) < 1e-10);
    }

    #[test]
    fn lambda_homogeneity(w in arb_c(3.0), eta in arb_c(1.5), s in 0.3f64..3.0) {
        prop_assume!(!(w.im.abs() < 1e-3 && w.re < 0.0) && w.norm() > 0.1);
        let u = w + eta;
        prop_assume!((u - u.re.round().min(0.0)).norm() > 1e-3);
        let a = log_lambda(&ModifiedGammaArgs::new(w * s, eta * s, c(s, 0.0))).unwrap();
        let b = log_lambda(&ModifiedGammaArgs::new(w, eta, c(1.0, 0.0))).unwrap();
        prop_assert!(reduce(a - b) < 1e-10);
    }

    #[test]
    fn f_is_symmetric_in_its_periods(w in arb_c(2.0), eta in arb_c(1.0), a in 0.5f64..1.5, b in 0.3f64..1.3) {
        prop_assume!(w.re > 0.1);
        let w2 = c(a * 0.3, b);
        let x = log_f(&DoubleGammaArgs { w, eta, omega1: c(1.0, 0.0), omega2: w2 }).unwrap();
        let y = log_f(&DoubleGammaArgs { w, eta, omega1: w2, omega2: c(1.0, 0.0) }).unwrap();
        prop_assert!(reduce(x - y) < 1e-9);
    }

    #[test]
    fn quantum_dilog_difference(qr in 0.0f64..0.9, qa in -PI..PI, x in arb_c(3.0)) {
        let q = Complex64::from_polar(qr, qa);
        let a = quantum_dilog(&QDilogArgs { q, x }).unwrap();
        let b = quantum_dilog(&QDilogArgs { q, x: q * x }).unwrap();
        prop_assert!((a - (1.0 - x) * b).norm() < 1e-11 * (1.0 + a.norm()));
    }

    #[test]
    fn barnes_g_recurrence(z in arb_c(4.0)) {
        prop_assume!((z - z.re.round().min(0.0)).norm() > 1e-3);
        let d = log_barnes_g(z + 1.0).unwrap() - log_barnes_g(z).unwrap() - log_gamma(z).unwrap();
        prop_assert!(reduce(d) < 1e-10);
    }
}
