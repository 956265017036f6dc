//! Limit functions `Delta(w, eta)` and `Upsilon(w, theta)` built from the
//! Barnes G-function.
//!
//! ```text
//!   Delta(w, eta) = e^{-zeta'(-1)} G(u+1) e^{-w^2/4 + eta^2/2 - eta/2 + 1/12}
//!                   / (Gamma(u)^u w^{-u^2/2 + u/2 - 1/12}),         u = w + eta
//!   Upsilon(w, theta) = e^{-zeta'(-1)} G(u+1) e^{3w^2/4 + theta w}
//!                   / ((2 pi)^{u/2} w^{u^2/2 - 1/12}),             u = w + theta
//! ```
//!
//! Powers are `exp(B log .)` with principal logarithms.

use num_complex::Complex64;

use crate::error::Result;
use crate::special::gamma::{log_barnes_g, log_gamma, zeta_prime_minus_one, LN_2PI};
use crate::special::lambda::check_off_cut;

pub fn log_delta(w: Complex64, eta: Complex64) -> Result<Complex64> {
    check_off_cut("w", w)?;
    let u = w + eta;
    let lg = log_gamma(u)?;
    let g = log_barnes_g(u + 1.0)?;
    Ok(-zeta_prime_minus_one() + g - w * w / 4.0 + eta * eta / 2.0 - eta / 2.0 + 1.0 / 12.0 - u * lg
        + (u * u / 2.0 - u / 2.0 + 1.0 / 12.0) * w.ln())
}

pub fn delta_fn(w: Complex64, eta: Complex64) -> Result<Complex64> {
    log_delta(w, eta).map(|l| l.exp())
}

pub fn log_upsilon(w: Complex64, theta: Complex64) -> Result<Complex64> {
    check_off_cut("w", w)?;
    let u = w + theta;
    let g = log_barnes_g(u + 1.0)?;
    Ok(-zeta_prime_minus_one() + g + 0.75 * w * w + theta * w
        - u * (LN_2PI / 2.0)
        - (u * u / 2.0 - 1.0 / 12.0) * w.ln())
}

pub fn upsilon_fn(w: Complex64, theta: Complex64) -> Result<Complex64> {
    log_upsilon(w, theta).map(|l| l.exp())
}
