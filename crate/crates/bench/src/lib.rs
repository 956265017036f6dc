//! Shared inputs for the benchmarks.

use qrh_core::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A fixed spread of arguments in the right half-plane, away from the cut.
pub fn sample_ws(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let s = k as f64 / n as f64;
            Complex64::from_polar(0.3 + 4.0 * s, -1.3 + 2.6 * s)
        })
        .collect()
}
