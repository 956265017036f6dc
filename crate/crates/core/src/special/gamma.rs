//! Principal log-gamma, the Barnes G-function and the constant `zeta'(-1)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::bernoulli::bernoulli_number;
use crate::error::{Error, Result};

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;
pub(crate) const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Distance below which an argument is treated as sitting on a pole lattice.
pub const POLE_EPS: f64 = 1e-12;

const STIRLING_RADIUS: f64 = 16.0;
const STIRLING_TERMS: usize = 12;
const MAX_SHIFTS: usize = 200_000;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Nearest non-positive integer to `z` if `z` lies within `POLE_EPS` of it.
pub(crate) fn nonpositive_integer_near(z: Complex64) -> Option<f64> {
    let r = z.re.round();
    if r <= 0.0 && (z - r).norm() <= POLE_EPS * r.abs().max(1.0) {
        Some(r)
    } else {
        None
    }
}

/// `ln(1 + z)` without cancellation for small `|z|`.
pub(crate) fn ln_1p(z: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * z.re + z.re * z.re + z.im * z.im).ln_1p();
    let im = z.im.atan2(1.0 + z.re);
    c(re, im)
}

/// Integer `k` such that `a - b` is closest to `2 pi i k`.
pub(crate) fn winding(a: Complex64, b: Complex64) -> f64 {
    ((a - b).im / (2.0 * PI)).round()
}

fn stirling(z: Complex64) -> Complex64 {
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + stirling_tail(z)
}

pub(crate) fn stirling_valid(z: Complex64) -> bool {
    z.norm() >= STIRLING_RADIUS && (z.re >= 0.0 || z.im.abs() >= z.re.abs())
}

/// Tail `sum_k B_{2k} / (2k(2k-1) z^{2k-1})` of Stirling's series, for use
/// in cancellation-free expressions when `stirling_valid(z)`.
pub(crate) fn stirling_tail(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut tail = c(0.0, 0.0);
    for k in 1..=STIRLING_TERMS {
        let b = bernoulli_number(2 * k);
        tail += pow * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        pow *= inv2;
    }
    tail
}

/// `log sin(pi z)` continuous on the closed upper (resp. open lower)
/// half-plane, written so that it never overflows.
fn log_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im >= 0.0 {
        let e = (2.0 * PI * i * z).exp();
        c(-std::f64::consts::LN_2, PI / 2.0) - i * PI * z + ln_1p(-e)
    } else {
        let e = (-2.0 * PI * i * z).exp();
        c(-std::f64::consts::LN_2, -PI / 2.0) + i * PI * z + ln_1p(-e)
    }
}

/// Principal branch of `log Gamma(z)`, analytic on `C \ (-inf, 0]` and
/// continuous from above on the negative real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if let Some(r) = nonpositive_integer_near(z) {
        return Err(Error::Pole { location: c(r, 0.0) });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::invalid(format!("non-finite argument {z}")));
    }
    if stirling_valid(z) {
        return Ok(stirling(z));
    }
    if z.re < -8.0 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z); the branch agrees with the
        // principal one at z = 1/2 and both sides are continuous on each
        // closed half-plane.
        let rest = log_gamma(1.0 - z)?;
        return Ok(c(PI.ln(), 0.0) - log_sin_pi(z) - rest);
    }
    let n = (STIRLING_RADIUS - z.re).ceil().max(0.0) as usize;
    let mut acc = c(0.0, 0.0);
    for k in 0..n {
        acc += (z + k as f64).ln();
    }
    Ok(stirling(z + n as f64) - acc)
}

/// `Gamma(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// Settings for the Barnes G evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarnesGConfig {
    /// Arguments are shifted until `Re(z - 1)` reaches this threshold.
    pub threshold: f64,
    /// Number of terms in the large-argument expansion.
    pub terms: usize,
}

impl Default for BarnesGConfig {
    fn default() -> Self {
        Self { threshold: 15.0, terms: 10 }
    }
}

fn log_g_asymptotic(z: Complex64, terms: usize) -> Complex64 {
    // log G(z + 1)
    let lz = z.ln();
    let z2 = z * z;
    let inv2 = z2.inv();
    let mut pow = inv2;
    let mut tail = c(0.0, 0.0);
    for k in 1..=terms {
        let b = bernoulli_number(2 * k + 2);
        tail += pow * (b / (4.0 * k as f64 * (k + 1) as f64));
        pow *= inv2;
    }
    (z2 / 2.0 - 1.0 / 12.0) * lz - 0.75 * z2 + z * (LN_2PI / 2.0) + zeta_prime_minus_one() + tail
}

/// `log G(z)` for the Barnes G-function, with `G(1) = 1` and
/// `log G(z + 1) = log Gamma(z) + log G(z)` holding exactly for the principal
/// `log_gamma`. `G` vanishes at `0, -1, -2, ...`.
pub fn log_barnes_g(z: Complex64) -> Result<Complex64> {
    log_barnes_g_with(z, &BarnesGConfig::default())
}

pub fn log_barnes_g_with(z: Complex64, cfg: &BarnesGConfig) -> Result<Complex64> {
    if let Some(r) = nonpositive_integer_near(z) {
        return Err(Error::Zero { location: c(r, 0.0) });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::invalid(format!("non-finite argument {z}")));
    }
    let big = z - 1.0;
    if big.norm() >= cfg.threshold && (big.re >= 0.0 || big.im.abs() >= big.re.abs()) {
        return Ok(log_g_asymptotic(big, cfg.terms));
    }
    let n = (cfg.threshold - big.re).ceil().max(0.0) as usize;
    if n > MAX_SHIFTS {
        return Err(Error::Unsupported(format!("Barnes G argument {z} too far into the left half-plane")));
    }
    let mut acc = c(0.0, 0.0);
    for k in 0..n {
        acc += log_gamma(z + k as f64)?;
    }
    Ok(log_g_asymptotic(big + n as f64, cfg.terms) - acc)
}

/// `zeta'(-1)` by Euler-Maclaurin summation of the derivative of the
/// Riemann zeta function, computed once.
pub fn zeta_prime_minus_one() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| zeta_prime_em(-1.0, 20, 12))
}

/// `zeta'(s)` for real `s != 1` via Euler-Maclaurin with `n` explicit terms
/// and `terms` Bernoulli corrections.
pub fn zeta_prime_em(s: f64, n: usize, terms: usize) -> f64 {
    let nf = n as f64;
    let ln_n = nf.ln();
    let mut acc = 0.0;
    for k in 2..n {
        let kf = k as f64;
        acc -= kf.ln() * kf.powf(-s);
    }
    // d/ds [N^{1-s}/(s-1)]
    let p = nf.powf(1.0 - s);
    acc += -ln_n * p / (s - 1.0) - p / ((s - 1.0) * (s - 1.0));
    // d/ds [N^{-s}/2]
    acc -= ln_n * nf.powf(-s) / 2.0;
    let mut fact = 1.0;
    for k in 1..=terms {
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        // P(s) = s (s+1) ... (s+2k-2) and its derivative
        let m = 2 * k - 1;
        let mut poly = 1.0;
        let mut dpoly = 0.0;
        for j in 0..m {
            let f = s + j as f64;
            dpoly = dpoly * f + poly;
            poly *= f;
        }
        let pw = nf.powf(-s - (2 * k) as f64 + 1.0);
        acc += bernoulli_number(2 * k) / fact * (dpoly - ln_n * poly) * pw;
    }
    acc
}

/// Constants appearing in the limit functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub zeta_prime_minus_one: f64,
    /// `Gamma_2(x | 1, 1)^{-1} = rho G(x) (2 pi)^{-x/2}`.
    pub rho: f64,
}

pub fn constants() -> Constants {
    let z = zeta_prime_minus_one();
    Constants { zeta_prime_minus_one: z, rho: (2.0 * PI).sqrt() * (-z).exp() }
}
