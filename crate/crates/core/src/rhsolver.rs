//! Closed-form solutions of the quantum Riemann-Hilbert problem for
//! finite, uncoupled, palindromic, integral refined BPS structures, with the
//! doubled A1 case treated separately, and their `tau -> 0` and `tau -> 1`
//! limits.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bps::{
    active_rays, canonical_refinement, classify, em_splitting, kappa_from_pairing, Charge, EMSplitting,
    QuadraticRefinement, Ray, RefinedBPSStructure, RAY_TOL,
};
use crate::error::{Error, Result};
use crate::special::{log_delta, log_f, log_lambda, log_upsilon, DoubleGammaArgs, ModifiedGammaArgs};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which of the two doubled A1 solutions: `Psi_+` lives on `C* \ i l_+`,
/// `Psi_-` on `C* \ i l_-`, where `l_+- = R_{>0} (+-z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// A point `(t, tau, theta)` on one sheet of the doubled A1 problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationPoint {
    pub t: Complex64,
    pub side: Side,
    pub tau: Complex64,
    pub theta: Complex64,
}

impl EvaluationPoint {
    pub fn new(t: Complex64, side: Side, tau: Complex64, theta: Complex64) -> Self {
        Self { t, side, tau, theta }
    }
}

/// `z / (2 pi i t)`.
pub fn w_of(z: Complex64, t: Complex64) -> Complex64 {
    z / (c(0.0, 2.0 * PI) * t)
}

fn check_t(t: Complex64) -> Result<()> {
    if t.norm() == 0.0 || !t.norm().is_finite() {
        return Err(Error::invalid("t must be non-zero and finite"));
    }
    Ok(())
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::domain(format!("tau = {tau} is not in the upper half-plane")));
    }
    Ok(())
}

/// `+-z/(2 pi i t)`, rejecting `t` on the excluded ray `i l_+-`.
fn side_w(z: Complex64, p: &EvaluationPoint) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::invalid("z must be non-zero"));
    }
    check_t(p.t)?;
    let w = w_of(z, p.t) * p.side.sign();
    if w.re < 0.0 && w.im.abs() <= RAY_TOL * w.norm() {
        return Err(Error::domain(format!("t = {} lies on the excluded ray of the {:?} sheet", p.t, p.side)));
    }
    Ok(w)
}

fn log_lambda1(w: Complex64, eta: Complex64) -> Result<Complex64> {
    log_lambda(&ModifiedGammaArgs::new(w, eta, ONE))
}

/// Logarithm of the multiplier of `y_{n alpha_dual}` under `Psi_+-(t)`.
pub fn log_solve_a1(z: Complex64, p: &EvaluationPoint, n: i64) -> Result<Complex64> {
    check_tau(p.tau)?;
    let w = side_w(z, p)?;
    let s = p.side.sign();
    let (range, power) = if n >= 0 { (0..n, s) } else { (n..0, -s) };
    let mut acc = c(0.0, 0.0);
    for j in range {
        let eta = 0.5 - s * (p.theta + (j as f64 + 0.5) * p.tau);
        acc += power * log_lambda1(w, eta)?;
    }
    Ok(acc)
}

/// Multiplier of `y_{n alpha_dual}` under `Psi_+-(t)`:
/// `prod_j Lambda(+-z/(2 pi i t), 1/2 -+ (theta + (j + 1/2) tau) | 1)^{+-1}`.
pub fn solve_a1(z: Complex64, p: &EvaluationPoint, n: i64) -> Result<Complex64> {
    log_solve_a1(z, p, n).map(|l| l.exp())
}

/// `log psi_+-(t) = -log F(+-z/(2 pi i t), (1 + tau)/2 -+ theta | 1, tau)`.
pub fn log_adjoint_psi_a1(z: Complex64, p: &EvaluationPoint) -> Result<Complex64> {
    let w = side_w(z, p)?;
    let eta = 0.5 * (1.0 + p.tau) - p.side.sign() * p.theta;
    Ok(-log_f(&DoubleGammaArgs { w, eta, omega1: ONE, omega2: p.tau })?)
}

pub fn adjoint_psi_a1(z: Complex64, p: &EvaluationPoint) -> Result<Complex64> {
    log_adjoint_psi_a1(z, p).map(|l| l.exp())
}

/// `|LHS / RHS - 1|` for
/// `Lambda(w, 1/2 - xi) = Lambda(-w, 1/2 + xi)^{-1} (1 + e^{+-pi i tau} e^{-+z/t} e^{+-2 pi i theta})^{-1}`,
/// `w = z/(2 pi i t)`, `xi = theta + tau/2`, with the sign of `Re(t/z)`.
pub fn verify_jump_a1(z: Complex64, t: Complex64, tau: Complex64, theta: Complex64) -> Result<f64> {
    check_t(t)?;
    check_tau(tau)?;
    let ratio = t / z;
    if ratio.re == 0.0 {
        return Err(Error::domain("Re(t/z) = 0 is on an active ray of t"));
    }
    let s = ratio.re.signum();
    let w = w_of(z, t);
    let xi = theta + tau / 2.0;
    let lhs = log_lambda1(w, 0.5 - xi)?;
    let e = (c(0.0, s * PI) * tau - s * z / t + c(0.0, s * 2.0 * PI) * theta).exp();
    let factor = ONE + e;
    if factor.norm() <= 1e-14 {
        return Err(Error::Zero { location: t });
    }
    let rhs = -log_lambda1(-w, 0.5 + xi)? - factor.ln();
    let d = lhs - rhs;
    let k = (d.im / (2.0 * PI)).round();
    Ok(((d - c(0.0, 2.0 * PI * k)).exp() - ONE).norm())
}

/// Result of the `t -> 0` and `t -> infinity` checks of one sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    /// `|multiplier - 1|` at `t = t0 2^{-j}`, `j = 1..=12`.
    pub zero_limit_profile: Vec<f64>,
    pub zero_limit_residual: f64,
    /// True if the profile decreases over its last six steps.
    pub monotone_tail: bool,
    /// `max_j |log|multiplier|| / log|t|` over `t = 10^j t0/|t0|`, `j = 1..=6`.
    pub growth_exponent: f64,
}

/// Starting point used by `verify_limits_a1` when none is supplied: a small
/// multiple of `+-z`, inside the region `+-Re(t/z) > 0`.
pub fn default_t0(z: Complex64, side: Side) -> Complex64 {
    z * side.sign() * 1e-4
}

pub fn verify_limits_a1(
    z: Complex64,
    side: Side,
    tau: Complex64,
    theta: Complex64,
    t0: Option<Complex64>,
) -> Result<LimitReport> {
    let t0 = t0.unwrap_or_else(|| default_t0(z, side));
    check_t(t0)?;
    let mut profile = Vec::with_capacity(12);
    for j in 1..=12 {
        let t = t0 * 0.5f64.powi(j);
        let m = solve_a1(z, &EvaluationPoint::new(t, side, tau, theta), 1)?;
        profile.push((m - ONE).norm());
    }
    let tail = &profile[profile.len() - 6..];
    let monotone_tail = tail.windows(2).all(|p| p[1] < p[0]);
    let dir = t0 / t0.norm();
    let mut growth: f64 = 0.0;
    for j in 1..=6 {
        let t = dir * 10f64.powi(j);
        let l = log_solve_a1(z, &EvaluationPoint::new(t, side, tau, theta), 1)?;
        growth = growth.max(l.re.abs() / t.norm().ln());
    }
    Ok(LimitReport {
        zero_limit_residual: *profile.last().unwrap_or(&f64::NAN),
        zero_limit_profile: profile,
        monotone_tail,
        growth_exponent: growth,
    })
}

/// A structure satisfying the four conditions together with the data the
/// general solution needs.
#[derive(Debug, Clone)]
pub struct RHInstance {
    pub structure: RefinedBPSStructure,
    pub splitting: EMSplitting,
    pub refinement: QuadraticRefinement,
    pub rays: Vec<Ray>,
}

impl RHInstance {
    pub fn new(structure: RefinedBPSStructure) -> Result<Self> {
        let cls = classify(&structure);
        if !cls.all() {
            return Err(Error::Unsupported(format!(
                "structure must be finite, uncoupled, palindromic and integral (got {cls:?})"
            )));
        }
        let splitting = em_splitting(&structure, None)?;
        let refinement = canonical_refinement(&structure)?;
        let rays = active_rays(&structure)?;
        Ok(Self { structure, splitting, refinement, rays })
    }

    /// `Re(Z(gamma) / (i r))`; positive iff `Z(gamma)` lies in `i H_r`.
    fn side_of(&self, r: &Ray, g: &Charge) -> f64 {
        (self.structure.z(g) / (c(0.0, 1.0) * r.phase)).re
    }

    fn check_ray(&self, r: &Ray, t: Complex64) -> Result<()> {
        check_t(t)?;
        for (g, _) in self.structure.active_classes() {
            let zg = self.structure.z(g);
            if self.side_of(r, g).abs() <= RAY_TOL * zg.norm() {
                return Err(Error::invalid(format!(
                    "ray {} is not a non-active ray: Z({g}) lies on the boundary of i H_r",
                    r.phase
                )));
            }
        }
        if !((t / r.phase).re > 0.0) {
            return Err(Error::domain(format!("t = {t} is outside the half-plane H_r")));
        }
        Ok(())
    }

    fn theta_of(&self, g: &Charge, theta: &[Complex64]) -> Result<Complex64> {
        let (e, m) = self.splitting.coordinates(g)?;
        if m.iter().any(|&x| x != 0) {
            return Err(Error::Inconsistent(format!("class {g} is not electric")));
        }
        if theta.len() != e.len() {
            return Err(Error::DimensionMismatch { expected: e.len(), found: theta.len() });
        }
        Ok(e.iter().zip(theta).map(|(k, t)| t * *k as f64).sum())
    }

    /// Active classes with `Z(gamma) in i H_r` and their integer invariants.
    fn classes_in(&self, r: &Ray) -> Result<Vec<(Charge, Vec<(i32, i32)>)>> {
        let mut out = Vec::new();
        for (g, poly) in self.structure.active_classes() {
            if self.side_of(r, g) > 0.0 {
                let mut terms = Vec::new();
                for (n, om) in poly.terms() {
                    if !om.is_integer() {
                        return Err(Error::Unsupported(format!("non-integral invariant {om}")));
                    }
                    let om =
                        om.to_integer().to_i32().ok_or_else(|| Error::Unsupported("invariant out of range".into()))?;
                    terms.push((n, om));
                }
                out.push((g.clone(), terms));
            }
        }
        Ok(out)
    }
}

/// Logarithm of the multiplier of `y_beta` under `Psi_r(t)`:
/// `sum_gamma sum_{lambda in kappa(beta, gamma)} sum_n Omega_n eps
///  log Lambda(Z/(2 pi i t), 1/2 - theta(gamma) - (n/2 + lambda) tau | 1)`.
pub fn log_solve_general(
    inst: &RHInstance,
    r: &Ray,
    t: Complex64,
    tau: Complex64,
    theta: &[Complex64],
    beta: &Charge,
) -> Result<Complex64> {
    inst.check_ray(r, t)?;
    check_tau(tau)?;
    let mut acc = c(0.0, 0.0);
    for (g, terms) in inst.classes_in(r)? {
        let w = w_of(inst.structure.z(&g), t);
        let th = inst.theta_of(&g, theta)?;
        let (eps, kappa) = kappa_from_pairing(inst.structure.pairing(beta, &g));
        for lambda in &kappa {
            for &(n, om) in &terms {
                let eta = 0.5 - th - (n as f64 / 2.0 + lambda.value()) * tau;
                acc += (om as f64 * eps as f64) * log_lambda1(w, eta)?;
            }
        }
    }
    Ok(acc)
}

pub fn solve_general(
    inst: &RHInstance,
    r: &Ray,
    t: Complex64,
    tau: Complex64,
    theta: &[Complex64],
    beta: &Charge,
) -> Result<Complex64> {
    log_solve_general(inst, r, t, tau, theta, beta).map(|l| l.exp())
}

/// `log psi_r(t) = -sum_gamma sum_n Omega_n(gamma)
///  log F(Z/(2 pi i t), 1/2 + (n + 1) tau/2 - theta(gamma) | 1, tau)`.
pub fn log_adjoint_general(
    inst: &RHInstance,
    r: &Ray,
    t: Complex64,
    tau: Complex64,
    theta: &[Complex64],
) -> Result<Complex64> {
    inst.check_ray(r, t)?;
    check_tau(tau)?;
    let mut acc = c(0.0, 0.0);
    for (g, terms) in inst.classes_in(r)? {
        let w = w_of(inst.structure.z(&g), t);
        let th = inst.theta_of(&g, theta)?;
        for &(n, om) in &terms {
            let eta = 0.5 + (n as f64 + 1.0) * tau / 2.0 - th;
            let lf = log_f(&DoubleGammaArgs { w, eta, omega1: ONE, omega2: tau })?;
            acc -= om as f64 * lf;
        }
    }
    Ok(acc)
}

pub fn adjoint_general(
    inst: &RHInstance,
    r: &Ray,
    t: Complex64,
    tau: Complex64,
    theta: &[Complex64],
) -> Result<Complex64> {
    log_adjoint_general(inst, r, t, tau, theta).map(|l| l.exp())
}

/// The jump factor `prod_gamma prod_lambda prod_n (1 + exp(2 pi i theta(gamma)
/// + 2 pi i (n/2 + lambda) tau - Z(gamma)/t))^{-Omega_n eps}` of an active ray.
pub fn jump_factor(
    inst: &RHInstance,
    ray: &Ray,
    t: Complex64,
    tau: Complex64,
    theta: &[Complex64],
    beta: &Charge,
) -> Result<Complex64> {
    let mut acc = ONE;
    for g in &ray.classes {
        let zg = inst.structure.z(g);
        let th = inst.theta_of(g, theta)?;
        let (eps, kappa) = kappa_from_pairing(inst.structure.pairing(beta, g));
        for (n, om) in inst.structure.omega(g).terms() {
            let om = om.to_integer() as i32;
            for lambda in &kappa {
                let x = (c(0.0, 2.0 * PI) * (th + (n as f64 / 2.0 + lambda.value()) * tau) - zg / t).exp();
                let f = ONE + x;
                if f.norm() == 0.0 {
                    return Err(Error::Zero { location: t });
                }
                acc *= f.powi(-om * eps as i32);
            }
        }
    }
    Ok(acc)
}

/// Rays `r_+` and `r_-` obtained by rotating `ray` clockwise and
/// anticlockwise by `angle`.
pub fn perturbed_rays(ray: &Ray, angle: f64) -> Result<(Ray, Ray)> {
    let rot = c(0.0, angle).exp();
    Ok((Ray::direction(ray.phase / rot)?, Ray::direction(ray.phase * rot)?))
}

/// Richardson extrapolation of values at steps `h_0 2^{-j}` assuming an error
/// expansion in integer powers of `h`; returns the last diagonal entry.
pub fn richardson(values: &[Complex64]) -> Complex64 {
    let mut table: Vec<Complex64> = values.to_vec();
    let n = table.len();
    for k in 1..n {
        let f = 2f64.powi(k as i32) - 1.0;
        for j in (k..n).rev() {
            table[j] = table[j] + (table[j] - table[j - 1]) / f;
        }
    }
    *table.last().unwrap_or(&c(f64::NAN, f64::NAN))
}

/// Path parameters for the `tau -> 0` extrapolation `tau_j = i s0 2^{-j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationConfig {
    pub s0: f64,
    pub first: i32,
    pub levels: usize,
}

impl Default for ExtrapolationConfig {
    fn default() -> Self {
        Self { s0: 1.0, first: 4, levels: 4 }
    }
}

/// `H_+-(z, t, theta) = -2 pi i log Delta(+-z/(2 pi i t), 1/2 -+ theta)`.
pub fn hamiltonian_limit(z: Complex64, t: Complex64, theta: Complex64, side: Side) -> Result<Complex64> {
    let p = EvaluationPoint::new(t, side, c(0.0, 1.0), theta);
    let w = side_w(z, &p)?;
    Ok(c(0.0, -2.0 * PI) * log_delta(w, 0.5 - side.sign() * theta)?)
}

/// Richardson-extrapolated `lim_{tau -> 0} (2 pi i tau) log psi_+-(t)` along
/// `tau_j = i s0 2^{-j}`.
pub fn hamiltonian_extrapolated(
    z: Complex64,
    t: Complex64,
    theta: Complex64,
    side: Side,
    cfg: &ExtrapolationConfig,
) -> Result<Complex64> {
    let mut vals = Vec::with_capacity(cfg.levels);
    for j in 0..cfg.levels {
        let tau = c(0.0, cfg.s0 * 0.5f64.powi(cfg.first + j as i32));
        let p = EvaluationPoint::new(t, side, tau, theta);
        vals.push(c(0.0, 2.0 * PI) * tau * log_adjoint_psi_a1(z, &p)?);
    }
    Ok(richardson(&vals))
}

/// `dH_+-/dtheta` by central differences with step `h`.
pub fn hamiltonian_derivative(z: Complex64, t: Complex64, theta: Complex64, side: Side, h: f64) -> Result<Complex64> {
    let up = hamiltonian_limit(z, t, theta + h, side)?;
    let down = hamiltonian_limit(z, t, theta - h, side)?;
    let d = up - down;
    // undo any branch jump of the logarithm between the two samples
    let k = (d.re / (4.0 * PI * PI)).round();
    Ok((d - 4.0 * PI * PI * k) / (2.0 * h))
}

/// `-+ 2 pi i log Lambda(+-z/(2 pi i t), 1/2 -+ theta | 1)`.
pub fn hamiltonian_derivative_closed(z: Complex64, t: Complex64, theta: Complex64, side: Side) -> Result<Complex64> {
    let p = EvaluationPoint::new(t, side, c(0.0, 1.0), theta);
    let w = side_w(z, &p)?;
    let s = side.sign();
    Ok(c(0.0, -2.0 * PI * s) * log_lambda1(w, 0.5 - s * theta)?)
}

/// The `tau -> 1` limit of `psi_+-(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauLimit {
    /// `w = +-z/(2 pi i t)`.
    pub w: Complex64,
    /// `Upsilon(w, -+theta)`.
    pub upsilon: Complex64,
    /// `F(w, 1 -+ theta | 1, 1)^{-1}`, the value of `psi_+-` at `tau = 1`.
    pub psi_limit: Complex64,
    /// `w^{-1/12} Upsilon(w, -+theta)`.
    pub scaled_upsilon: Complex64,
}

pub fn tau_function_limit(z: Complex64, t: Complex64, theta: Complex64, side: Side) -> Result<TauLimit> {
    let p = EvaluationPoint::new(t, side, ONE, theta);
    let w = side_w(z, &p)?;
    let s = side.sign();
    let lu = log_upsilon(w, -s * theta)?;
    let lf = log_f(&DoubleGammaArgs { w, eta: 1.0 - s * theta, omega1: ONE, omega2: ONE })?;
    Ok(TauLimit { w, upsilon: lu.exp(), psi_limit: (-lf).exp(), scaled_upsilon: (lu - w.ln() / 12.0).exp() })
}

/// Richardson-extrapolated `lim_{tau -> 1} psi_+-(t)` along `tau_j = 1 + i 2^{-j}`.
pub fn tau_limit_extrapolated(
    z: Complex64,
    t: Complex64,
    theta: Complex64,
    side: Side,
    first: i32,
    levels: usize,
) -> Result<Complex64> {
    let mut vals = Vec::with_capacity(levels);
    for j in 0..levels {
        let tau = c(1.0, 0.5f64.powi(first + j as i32));
        vals.push(log_adjoint_psi_a1(z, &EvaluationPoint::new(t, side, tau, theta))?);
    }
    Ok(richardson(&vals).exp())
}

/// `t_n = z / (2 pi i (n + theta + (1 + tau)/2))`.
pub fn predicted_singularity(z: Complex64, tau: Complex64, theta: Complex64, n: i64) -> Complex64 {
    z / (c(0.0, 2.0 * PI) * (n as f64 + theta + 0.5 * (1.0 + tau)))
}

/// Kind of singular point found by `locate_singularity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Singularity {
    Pole,
    Zero,
}

/// Locate a pole or zero of the `y_{alpha_dual}` multiplier of `Psi_+-` near
/// `guess` by a secant iteration on the multiplier (zeros) or its inverse
/// (poles). A pole signal raised on the way is reported at its location.
pub fn locate_singularity(
    z: Complex64,
    side: Side,
    tau: Complex64,
    theta: Complex64,
    guess: Complex64,
    kind: Singularity,
) -> Result<Complex64> {
    let g = |t: Complex64| -> Result<Complex64> {
        let l = log_solve_a1(z, &EvaluationPoint::new(t, side, tau, theta), 1)?;
        Ok(match kind {
            Singularity::Zero => l.exp(),
            Singularity::Pole => (-l).exp(),
        })
    };
    let eval = |t: Complex64| -> std::result::Result<Complex64, Complex64> {
        match g(t) {
            Ok(v) => Ok(v),
            Err(Error::Pole { .. }) | Err(Error::Zero { .. }) => Err(t),
            Err(_) => Err(c(f64::NAN, f64::NAN)),
        }
    };
    let mut t0 = guess;
    let mut t1 = guess * (1.0 + 1e-4);
    let mut f0 = match eval(t0) {
        Ok(v) => v,
        Err(t) => return finite_or_fail(t),
    };
    for _ in 0..100 {
        let f1 = match eval(t1) {
            Ok(v) => v,
            Err(t) => return finite_or_fail(t),
        };
        if f1 == f0 {
            return Ok(t1);
        }
        let t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        if (t2 - t1).norm() <= 1e-15 * t1.norm() {
            return Ok(t2);
        }
        t0 = t1;
        f0 = f1;
        t1 = t2;
    }
    Err(Error::Unsupported("singularity search did not converge".into()))
}

fn finite_or_fail(t: Complex64) -> Result<Complex64> {
    if t.re.is_finite() && t.im.is_finite() {
        Ok(t)
    } else {
        Err(Error::Unsupported("singularity search left the domain".into()))
    }
}

/// Which singularity of which sheet sits at `t_n`: poles of `Psi_+` for
/// `n < 0`, zeros of `Psi_-` for `n >= 0`.
pub fn singularity_kind(n: i64) -> (Side, Singularity) {
    if n < 0 {
        (Side::Plus, Singularity::Pole)
    } else {
        (Side::Minus, Singularity::Zero)
    }
}
