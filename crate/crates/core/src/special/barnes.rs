//! Barnes gamma functions `Gamma_1`, `Gamma_2` and the modified double gamma
//! function `F`.
//!
//! `log Gamma_2(x | w1, w2)` is evaluated by rotating the parameters into the
//! right half-plane with the homogeneity relation, shifting `x` along one
//! parameter with the difference relation
//!
//! ```text
//!   log Gamma_2(x) = log Gamma_2(x + a_2) + log Gamma_1(x | a_1)
//! ```
//!
//! until `Re(x) >= R`, and summing the large-argument expansion there with
//! optimal truncation. The rotation is the conjugate unit bisector of the two
//! parameters, so any pair lying in a common open half-plane is accepted.

use num_complex::Complex64;

use crate::bernoulli::{b22, BernoulliTable};
use crate::error::{Error, Result};
use crate::special::gamma::{c, ln_1p, log_gamma, winding, HALF_LN_2PI};

/// Parameters of the `Gamma_2` evaluation scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma2Config {
    /// Shift target `R = radius_factor * max |a_i|`.
    pub radius_factor: f64,
    /// Shifts applied beyond the minimum needed to reach `R`.
    pub extra_shifts: usize,
    /// Largest order summed in the asymptotic tail.
    pub max_terms: usize,
    /// Refuse arguments that need more shifts than this.
    pub max_shifts: usize,
}

impl Default for Gamma2Config {
    fn default() -> Self {
        Self { radius_factor: 10.0, extra_shifts: 0, max_terms: 60, max_shifts: 100_000 }
    }
}

/// Arguments of `F(w, eta | w1, w2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleGammaArgs {
    pub w: Complex64,
    pub eta: Complex64,
    pub omega1: Complex64,
    pub omega2: Complex64,
}

/// `log Gamma_1(x | a) = log Gamma(x/a) + (x/a - 1/2) log a - log(2 pi)/2`.
pub fn log_gamma1(x: Complex64, a: Complex64) -> Result<Complex64> {
    check_param(a)?;
    let u = x / a;
    let lg = log_gamma(u).map_err(|e| match e {
        Error::Pole { .. } => Error::Pole { location: x },
        other => other,
    })?;
    Ok(lg + (u - 0.5) * a.ln() - HALF_LN_2PI)
}

fn check_param(a: Complex64) -> Result<()> {
    if a.norm() == 0.0 || !a.re.is_finite() || !a.im.is_finite() {
        return Err(Error::invalid(format!("parameter {a} must be non-zero and finite")));
    }
    if a.im == 0.0 && a.re < 0.0 {
        return Err(Error::domain(format!("parameter {a} lies on the negative real axis")));
    }
    Ok(())
}

/// Rotated frame in which both parameters have positive real part.
struct Frame {
    mu: Complex64,
    ln_mu: Complex64,
    /// Rotated parameters; the shift runs along `a[0]`.
    a: [Complex64; 2],
    table: BernoulliTable,
}

impl Frame {
    fn new(w1: Complex64, w2: Complex64, cfg: &Gamma2Config) -> Result<Self> {
        check_param(w1)?;
        check_param(w2)?;
        let mu = if w1.re > 0.0 && w2.re > 0.0 {
            c(1.0, 0.0)
        } else {
            let bisector = w1 / w1.norm() + w2 / w2.norm();
            if bisector.norm() < 1e-12 {
                return Err(Error::domain(format!("parameters {w1} and {w2} do not lie in a common half-plane")));
            }
            let mu = bisector.conj() / bisector.norm();
            if mu.im == 0.0 && mu.re < 0.0 {
                return Err(Error::domain(format!("parameters {w1} and {w2} straddle the negative real axis")));
            }
            mu
        };
        let (r1, r2) = (mu * w1, mu * w2);
        let a = if r1.re >= r2.re { [r1, r2] } else { [r2, r1] };
        let table = BernoulliTable::new(&a, cfg.max_terms + 2)?;
        Ok(Self { mu, ln_mu: mu.ln(), a, table })
    }

    /// Shift `x` (rotated frame) to `Y` with `Re(Y) >= R`; returns `(n, S)`
    /// with `log Gamma_2(x) = log Gamma_2(x + n a_0) + S`.
    fn shift(&self, x: Complex64, cfg: &Gamma2Config) -> Result<(usize, Complex64)> {
        let r = cfg.radius_factor * self.a[0].norm().max(self.a[1].norm());
        let step = self.a[0];
        let needed = ((r - x.re) / step.re).ceil().max(0.0);
        if needed > cfg.max_shifts as f64 {
            return Err(Error::Unsupported(format!("argument {x} needs {needed} recurrence steps")));
        }
        let n = needed as usize + cfg.extra_shifts;
        let mut s = c(0.0, 0.0);
        for k in 0..n {
            s += log_gamma1(x + step * k as f64, self.a[1])?;
        }
        Ok((n, s))
    }

    /// `sum_k (-1)^k B_{2,k+2}(0|a) / (k(k+1)(k+2)) Y^{-k}`, stopped before
    /// the first term exceeding the one two places earlier (odd-index
    /// coefficients can be much smaller than their neighbours when the
    /// parameters have very different sizes).
    fn tail(&self, y: Complex64, max_terms: usize) -> Complex64 {
        let inv = y.inv();
        let mut pow = inv;
        let mut acc = c(0.0, 0.0);
        let mut sizes = [f64::INFINITY; 2];
        for k in 1..=max_terms {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = self.table.at_zero(k + 2) * pow * (sign / (kf * (kf + 1.0) * (kf + 2.0)));
            let size = term.norm();
            if size > sizes[0] {
                break;
            }
            acc += term;
            if size.max(sizes[1]) <= 1e-18 * acc.norm() {
                break;
            }
            sizes = [sizes[1], size];
            pow *= inv;
        }
        acc
    }

    fn p(&self) -> Complex64 {
        self.a[0] * self.a[1]
    }

    fn s(&self) -> Complex64 {
        self.a[0] + self.a[1]
    }
}

/// `log Gamma_2(x | w1, w2)`.
pub fn log_gamma2(x: Complex64, w1: Complex64, w2: Complex64) -> Result<Complex64> {
    log_gamma2_with(x, w1, w2, &Gamma2Config::default())
}

pub fn log_gamma2_with(x: Complex64, w1: Complex64, w2: Complex64, cfg: &Gamma2Config) -> Result<Complex64> {
    let frame = Frame::new(w1, w2, cfg)?;
    let xr = frame.mu * x;
    let (n, s) = frame.shift(xr, cfg).map_err(|e| relocate(e, x))?;
    let y = xr + frame.a[0] * n as f64;
    let (p, sum) = (frame.p(), frame.s());
    let asym = -0.5 * b22(y, frame.a[0], frame.a[1]) * y.ln() + 0.75 * y * y / p - sum * y / (2.0 * p)
        + frame.tail(y, cfg.max_terms);
    Ok(s + asym + 0.5 * b22(x, w1, w2) * frame.ln_mu)
}

fn relocate(e: Error, at: Complex64) -> Error {
    match e {
        Error::Pole { .. } => Error::Pole { location: at },
        other => other,
    }
}

fn check_w(w: Complex64) -> Result<()> {
    if w.norm() == 0.0 || (w.im == 0.0 && w.re < 0.0) {
        return Err(Error::domain(format!("w = {w} lies on the branch cut (-inf, 0]")));
    }
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::invalid(format!("non-finite argument w = {w}")));
    }
    Ok(())
}

/// `log F(w, eta | w1, w2)` with the principal `log w`.
///
/// Evaluated without forming `log Gamma_2(w + eta)` explicitly, so that the
/// large cancelling terms `w^2 log w` never appear.
pub fn log_f(args: &DoubleGammaArgs) -> Result<Complex64> {
    log_f_with(args, &Gamma2Config::default())
}

pub fn log_f_with(args: &DoubleGammaArgs, cfg: &Gamma2Config) -> Result<Complex64> {
    let DoubleGammaArgs { w, eta, omega1: w1, omega2: w2 } = *args;
    check_w(w)?;
    let frame = Frame::new(w1, w2, cfg)?;
    let y = w + eta;
    let xr = frame.mu * y;
    let (n, s) = frame.shift(xr, cfg).map_err(|e| relocate(e, w))?;
    let shift_rot = frame.a[0] * n as f64;
    let big_y = xr + shift_rot;
    let d = shift_rot / frame.mu;
    let dp = eta + d;
    let p = w1 * w2;
    let sum = w1 + w2;
    let ln_w = w.ln();

    let approx_rel = ln_1p(dp / w);
    let rel = approx_rel + c(0.0, 2.0 * std::f64::consts::PI) * winding(big_y.ln() - frame.ln_mu - ln_w, approx_rel);
    let b_big = b22(y + d, w1, w2);
    let db = (2.0 * y * d + d * d) / p - (w1.inv() + w2.inv()) * d;
    let poly = (1.5 * w * dp + 0.75 * dp * dp - 0.5 * sum * dp - eta * w) / p;
    Ok(s - 0.5 * b_big * rel - 0.5 * db * (frame.ln_mu + ln_w) + poly + frame.tail(big_y, cfg.max_terms))
}

/// `F(w, eta | w1, w2)`.
pub fn f_fn(args: &DoubleGammaArgs) -> Result<Complex64> {
    log_f(args).map(|l| l.exp())
}
