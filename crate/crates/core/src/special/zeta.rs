//! Barnes multiple zeta functions in their convergent regime.
//!
//! `zeta_N(s, x | a) = sum_{n in N^N} (x + n.a)^{-s}` for `Re(s) > N` and
//! `Re(a_i) > 0`, with `N <= 2`. The inner sum is direct summation plus an
//! Euler-Maclaurin tail; the double sum applies Euler-Maclaurin to the outer
//! index using `d/dx zeta_1(s, x) = -s zeta_1(s + 1, x)`.

use num_complex::Complex64;

use crate::bernoulli::bernoulli_number;
use crate::error::{Error, Result};

const DIRECT_TERMS: usize = 40;
const EM_TERMS: usize = 8;

fn falling(s: Complex64, j: usize) -> Complex64 {
    // (-s)(-s-1)...(-s-j+1)
    (0..j).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (-s - i as f64))
}

fn zeta1(s: Complex64, x: Complex64, a: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..DIRECT_TERMS {
        let u = x + a * n as f64;
        if u.norm() == 0.0 {
            return Err(Error::Pole { location: x });
        }
        acc += (-s * u.ln()).exp();
    }
    let m = DIRECT_TERMS as f64;
    let xm = x + a * m;
    let lxm = xm.ln();
    acc += ((1.0 - s) * lxm).exp() / (a * (s - 1.0));
    acc += (-s * lxm).exp() / 2.0;
    let mut fact = 1.0;
    for k in 1..=EM_TERMS {
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        let order = 2 * k - 1;
        let deriv = falling(s, order) * a.powu(order as u32) * (-(s + order as f64) * lxm).exp();
        acc -= deriv * (bernoulli_number(2 * k) / fact);
    }
    Ok(acc)
}

fn zeta2(s: Complex64, x: Complex64, a1: Complex64, a2: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..DIRECT_TERMS {
        acc += zeta1(s, x + a2 * m as f64, a1)?;
    }
    let xm = x + a2 * DIRECT_TERMS as f64;
    acc += zeta1(s - 1.0, xm, a1)? / (a2 * (s - 1.0));
    acc += zeta1(s, xm, a1)? / 2.0;
    let mut fact = 1.0;
    for k in 1..=EM_TERMS {
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        let order = 2 * k - 1;
        let deriv = falling(s, order) * a2.powu(order as u32) * zeta1(s + order as f64, xm, a1)?;
        acc -= deriv * (bernoulli_number(2 * k) / fact);
    }
    Ok(acc)
}

/// `zeta_N(s, x | a)` for `N = a.len()` in `{1, 2}` and `Re(s) > N`.
pub fn barnes_zeta(s: Complex64, x: Complex64, a: &[Complex64]) -> Result<Complex64> {
    let n = a.len();
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("Barnes zeta with {n} parameters")));
    }
    if a.iter().any(|ai| ai.re <= 0.0) {
        return Err(Error::domain("Barnes zeta requires Re(a_i) > 0"));
    }
    if s.re <= n as f64 {
        return Err(Error::Unsupported(format!("Re(s) = {} is outside the convergent regime Re(s) > {n}", s.re)));
    }
    match n {
        1 => zeta1(s, x, a[0]),
        _ => zeta2(s, x, a[0], a[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn brute1(s: Complex64, x: Complex64, a: Complex64, terms: usize) -> Complex64 {
        (0..terms).map(|n| (-s * (x + a * n as f64).ln()).exp()).sum()
    }

    #[test]
    fn riemann_zeta_two() {
        let v = barnes_zeta(c(2.0, 0.0), c(1.0, 0.0), &[c(1.0, 0.0)]).unwrap();
        assert!((v - PI * PI / 6.0).norm() < 1e-12);
    }

    #[test]
    fn double_sum_unit_params() {
        let v = barnes_zeta(c(3.0, 0.0), c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - PI * PI / 6.0).norm() < 1e-10);
    }

    #[test]
    fn hurwitz_scaling() {
        // zeta_1(s, x | a) = a^{-s} zeta_H(s, x / a), with a real positive
        let s = c(2.5, 0.3);
        let x = c(0.7, 0.0);
        let a = c(1.7, 0.0);
        let lhs = barnes_zeta(s, x, &[a]).unwrap();
        let rhs = (-s * a.ln()).exp() * barnes_zeta(s, x / a, &[c(1.0, 0.0)]).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn matches_brute_force_when_fast_decaying() {
        let s = c(9.0, 1.0);
        let x = c(0.8, 0.3);
        let a = c(1.1, 0.4);
        let v = barnes_zeta(s, x, &[a]).unwrap();
        let b = brute1(s, x, a, 4000);
        assert!((v - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn divergent_regime_rejected() {
        let r = barnes_zeta(c(2.0, 0.0), c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }
}
