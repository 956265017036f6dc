//! The quantum dilogarithm `E_q(x) = prod_{k >= 0} (1 - q^k x)` for `|q| < 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arguments of `E_q(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDilogArgs {
    pub q: Complex64,
    pub x: Complex64,
}

/// The product is truncated once `|q^K x| / (1 - |q|)` drops below this.
pub const QDILOG_GUARD: f64 = 1e-17;

const MAX_FACTORS: usize = 10_000_000;

pub fn quantum_dilog(args: &QDilogArgs) -> Result<Complex64> {
    let QDilogArgs { q, x } = *args;
    let r = q.norm();
    if !(r < 1.0) {
        return Err(Error::domain(format!("|q| = {r} is not below 1")));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    let mut term = x;
    for _ in 0..MAX_FACTORS {
        if term.norm() <= QDILOG_GUARD * (1.0 - r) {
            return Ok(prod);
        }
        prod *= 1.0 - term;
        term *= q;
    }
    Err(Error::Unsupported(format!("|q| = {r} too close to 1")))
}

/// `E_q(x)^{-1} = sum_n x^n / ((1-q)...(1-q^n))` for `|x| < 1`.
pub fn quantum_dilog_inverse_series(q: Complex64, x: Complex64, terms: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 0..terms {
        acc += term;
        qn *= q;
        term = term * x / (1.0 - qn);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(quantum_dilog(&QDilogArgs { q: c(0.7, 0.1), x: c(0.0, 0.0) }).unwrap(), c(1.0, 0.0));
        assert_eq!(quantum_dilog(&QDilogArgs { q: c(0.5, 0.0), x: c(1.0, 0.0) }).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn difference_relation() {
        let q = c(0.3, 0.2);
        let x = c(0.4, 0.0);
        let a = quantum_dilog(&QDilogArgs { q, x }).unwrap();
        let b = quantum_dilog(&QDilogArgs { q, x: q * x }).unwrap();
        assert!((a / b - (1.0 - x)).norm() < 1e-14);
    }

    #[test]
    fn series_identity() {
        let q = c(0.6, -0.5);
        let x = c(0.3, 0.4);
        let e = quantum_dilog(&QDilogArgs { q, x }).unwrap();
        let s = quantum_dilog_inverse_series(q, x, 400);
        assert!((e * s - 1.0).norm() < 1e-13);
    }

    #[test]
    fn unit_modulus_rejected() {
        assert!(matches!(quantum_dilog(&QDilogArgs { q: c(0.0, 1.0), x: c(0.1, 0.0) }), Err(Error::Domain(_))));
    }
}
