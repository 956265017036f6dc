//! Large-argument expansions of `log Lambda`, `log F` and the second Stirling
//! formula for `log Gamma_N(x + delta | a)`, `N in {1, 2}`.
//!
//! These series diverge; partial sums are returned as they are.

use num_complex::Complex64;

use crate::bernoulli::BernoulliTable;
use crate::error::{Error, Result};

/// `sum_{k=1}^{K} (-1)^{k+1} B_{1,k+1}(eta | omega) / (k(k+1)) w^{-k}`.
pub fn asymptotic_log_lambda(w: Complex64, eta: Complex64, omega: Complex64, order: usize) -> Result<Complex64> {
    let table = BernoulliTable::new(&[omega], order + 1)?;
    let inv = w.inv();
    let mut pow = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=order {
        let kf = k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += table.eval(k + 1, eta) * pow * (sign / (kf * (kf + 1.0)));
        pow *= inv;
    }
    Ok(acc)
}

/// `sum_{k=1}^{K} (-1)^k B_{2,k+2}(eta | w1, w2) / (k(k+1)(k+2)) w^{-k}`.
pub fn asymptotic_log_f(
    w: Complex64,
    eta: Complex64,
    omega1: Complex64,
    omega2: Complex64,
    order: usize,
) -> Result<Complex64> {
    let table = BernoulliTable::new(&[omega1, omega2], order + 2)?;
    let inv = w.inv();
    let mut pow = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=order {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += table.eval(k + 2, eta) * pow * (sign / (kf * (kf + 1.0) * (kf + 2.0)));
        pow *= inv;
    }
    Ok(acc)
}

/// Coefficients of the second Stirling approximant of
/// `log Gamma_N(x + delta | a)`:
///
/// ```text
///   log x * sum_d log_poly[d] x^d + sum_d poly[d] x^d + sum_k inverse[k-1] x^{-k}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SecondStirling {
    pub log_poly: Vec<Complex64>,
    pub poly: Vec<Complex64>,
    pub inverse: Vec<Complex64>,
}

impl SecondStirling {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let horner = |coeffs: &[Complex64], at: Complex64| {
            coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * at + c)
        };
        let inv = x.inv();
        horner(&self.log_poly, x) * x.ln() + horner(&self.poly, x) + horner(&self.inverse, inv) * inv
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|l| 1.0 / l as f64).sum()
}

/// Coefficients of the second Stirling approximant with `order` inverse
/// powers.
pub fn second_stirling_coefficients(x_delta: Complex64, a: &[Complex64], order: usize) -> Result<SecondStirling> {
    let n = a.len();
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("second Stirling expansion implemented for N = 1, 2 only (got {n})")));
    }
    let delta = x_delta;
    let table = BernoulliTable::new(a, n + order)?;
    let zero = Complex64::new(0.0, 0.0);
    let nfact: f64 = (1..=n).map(|i| i as f64).product();
    let lead = if n % 2 == 1 { 1.0 } else { -1.0 } / nfact;

    // B_{N,N}(x + delta) = sum_d C(N, d) B_{N,N-d}(delta) x^d
    let bnn: Vec<Complex64> = (0..=n).map(|d| table.eval(n - d, delta) * binomial(n, d)).collect();

    let mut poly = vec![zero; n + 1];
    // - sum_k c_{N,k} B_{N,k}(0) (x + delta)^{N-k}
    for k in 0..n {
        let ck = binomial(n, k) * harmonic(n - k);
        let bk = table.at_zero(k);
        let m = n - k;
        for d in 0..=m {
            poly[d] -= bk * ck * binomial(m, d) * delta.powu((m - d) as u32);
        }
    }
    // P_{N-1}: non-negative degree part of B_{N,N}(x + delta) sum_j (-1)^{j+1} delta^j x^{-j} / j
    for j in 1..=n {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let factor = delta.powu(j as u32) * (sign / j as f64);
        for d in j..=n {
            poly[d - j] += bnn[d] * factor;
        }
    }
    let poly = poly.into_iter().map(|p| p * lead).collect();
    let log_poly = bnn.into_iter().map(|b| b * lead).collect();
    let inverse = (1..=order)
        .map(|k| {
            let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
            let denom: f64 = (k..=k + n).map(|i| i as f64).product();
            table.eval(n + k, delta) * (sign / denom)
        })
        .collect();
    Ok(SecondStirling { log_poly, poly, inverse })
}

/// Value of the second Stirling approximant of `log Gamma_N(x + delta | a)`.
pub fn gamma_n_second_stirling(x: Complex64, delta: Complex64, a: &[Complex64], order: usize) -> Result<Complex64> {
    Ok(second_stirling_coefficients(delta, a, order)?.eval(x))
}
