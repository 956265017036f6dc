//! The modified gamma function
//!
//! ```text
//!   Lambda(w, eta | omega) = Gamma((w + eta)/omega) e^{w/omega} (w/omega)^{1/2 - (w + eta)/omega} / sqrt(2 pi)
//! ```
//!
//! with `log(w/omega)` read as `log w - log omega`, principal branches on each
//! factor separately.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::gamma::{
    c, ln_1p, log_gamma, nonpositive_integer_near, stirling_tail, stirling_valid, winding, HALF_LN_2PI,
};

/// Arguments of `Lambda(w, eta | omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedGammaArgs {
    pub w: Complex64,
    pub eta: Complex64,
    pub omega: Complex64,
}

impl ModifiedGammaArgs {
    pub fn new(w: Complex64, eta: Complex64, omega: Complex64) -> Self {
        Self { w, eta, omega }
    }
}

pub(crate) fn check_off_cut(name: &str, v: Complex64) -> Result<()> {
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::invalid(format!("non-finite {name} = {v}")));
    }
    if v.norm() == 0.0 || (v.im == 0.0 && v.re < 0.0) {
        return Err(Error::domain(format!("{name} = {v} lies on (-inf, 0]")));
    }
    Ok(())
}

/// `log Lambda(w, eta | omega)`.
///
/// For large `(w + eta)/omega` the Stirling parts cancel analytically, which
/// keeps the result accurate to the last few ulps even when `|w|` is huge.
pub fn log_lambda(args: &ModifiedGammaArgs) -> Result<Complex64> {
    let ModifiedGammaArgs { w, eta, omega } = *args;
    check_off_cut("w", w)?;
    check_off_cut("omega", omega)?;
    let u = (w + eta) / omega;
    if nonpositive_integer_near(u).is_some() {
        return Err(Error::Pole { location: w });
    }
    let lw = w.ln() - omega.ln();
    if stirling_valid(u) {
        let approx = ln_1p(eta / w);
        let rel = approx + c(0.0, 2.0 * std::f64::consts::PI) * winding(u.ln() - lw, approx);
        return Ok((u - 0.5) * rel - eta / omega + stirling_tail(u));
    }
    Ok(log_gamma(u)? + w / omega + (0.5 - u) * lw - HALF_LN_2PI)
}

/// `Lambda(w, eta | omega)`.
pub fn lambda_fn(args: &ModifiedGammaArgs) -> Result<Complex64> {
    log_lambda(args).map(|l| l.exp())
}
