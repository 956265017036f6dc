//! Seeded numerical verification suites. Each suite draws its sample points
//! from a ChaCha8 stream, evaluates one identity per point in parallel, and
//! aggregates the residuals in sample order.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::classical_bernoulli;
use crate::bps::{direct_sum, doubled_a1, em_splitting, Charge, LaurentPoly, Ray, RefinedBPSStructure};
use crate::error::{Error, Result};
use crate::qtorus::{ad, dt_adjoint_multiplier, eps_z, s_q_ray, CoefficientFunction, ExtendedAlgebra};
use crate::rhsolver::{
    hamiltonian_derivative, hamiltonian_derivative_closed, hamiltonian_extrapolated, hamiltonian_limit, jump_factor,
    locate_singularity, log_adjoint_general, log_solve_a1, log_solve_general, perturbed_rays, predicted_singularity,
    singularity_kind, solve_a1, tau_function_limit, tau_limit_extrapolated, verify_jump_a1, verify_limits_a1, w_of,
    EvaluationPoint, ExtrapolationConfig, RHInstance, Side,
};
use crate::special::{
    asymptotic_log_f, asymptotic_log_lambda, constants, log_barnes_g, log_f, log_gamma2, log_lambda, log_upsilon,
    quantum_dilog, quantum_dilog_inverse_series, second_stirling_coefficients, zeta_prime_em, zeta_prime_minus_one,
    DoubleGammaArgs, ModifiedGammaArgs, QDilogArgs,
};

/// Sample points closer than this to a pole or zero lattice are excluded.
pub const POLE_MARGIN: f64 = 1e-3;

/// Summary of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub excluded_near_pole: usize,
    pub pass: bool,
}

/// Residuals of one sample point, or its exclusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Residual { abs: f64, rel: f64 },
    Excluded,
}

impl Outcome {
    fn both(r: f64) -> Self {
        Outcome::Residual { abs: r, rel: r }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { samples: None, seed: 42, tol: None }
    }
}

type Runner = fn(usize, &mut ChaCha8Rng) -> Result<Vec<Outcome>>;

/// A registered suite: samples are drawn sequentially, evaluated in
/// parallel, and the pass criterion is `max_rel_residual <= tol`.
pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    pub default_samples: usize,
    pub tol: f64,
    run: Runner,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "reflection", description: "reflection identity of Lambda on both half-planes", default_samples: 200, tol: 1e-9, run: reflection },
    Suite { name: "f-difference", description: "difference relation F(w, eta + w2)/F(w, eta) = Lambda(w, eta | w1)^-1", default_samples: 200, tol: 1e-8, run: f_difference },
    Suite { name: "eq-difference", description: "E_q(x)/E_q(qx) = 1 - x for |q| <= 0.9", default_samples: 200, tol: 1e-12, run: eq_difference },
    Suite { name: "eq-series", description: "E_q(x)^-1 against its power series for |q| <= 0.9", default_samples: 200, tol: 1e-12, run: eq_series },
    Suite { name: "asymptotic-order", description: "error decay exponents of the Lambda and F expansions, |slope - (K+1)|", default_samples: 10, tol: 0.2, run: asymptotic_order },
    Suite { name: "gamma2-expansion", description: "recurrence-based log Gamma_2 against the direct large-|x| expansion", default_samples: 50, tol: 1e-9, run: gamma2_expansion },
    Suite { name: "second-stirling", description: "N = 1 second Stirling coefficients against the classical expansion", default_samples: 50, tol: 1e-12, run: second_stirling },
    Suite { name: "constants", description: "zeta'(-1) against log of the Glaisher constant and a longer Euler-Maclaurin sum, rho against the Gamma_2(x|1,1) expansion", default_samples: 20, tol: 1e-8, run: constants_suite },
    Suite { name: "jump-a1", description: "jump identity of the doubled A1 solution on both half-planes", default_samples: 100, tol: 1e-9, run: jump_a1 },
    Suite { name: "adjoint-a1", description: "Ad(psi) against Psi on y_alpha_dual", default_samples: 50, tol: 1e-8, run: adjoint_a1 },
    Suite { name: "powers-a1", description: "Psi(y_{2 alpha_dual}) against the twisted square of Psi(y_alpha_dual)", default_samples: 50, tol: 1e-12, run: powers_a1 },
    Suite { name: "limit-zero", description: "|Psi(y_alpha_dual) - 1| at the 12th dyadic step towards t = 0 (monotone tail required)", default_samples: 20, tol: 1e-6, run: limit_zero },
    Suite { name: "limit-growth", description: "growth exponent of Psi(y_alpha_dual) up to |t| = 1e6", default_samples: 20, tol: 5.0, run: limit_growth },
    Suite { name: "general-a1", description: "general solution specialised to doubled A1 against the doubled A1 formula", default_samples: 50, tol: 1e-12, run: general_a1 },
    Suite { name: "general-jump", description: "two-ray jump of the general solution against the wall-crossing factor", default_samples: 50, tol: 1e-9, run: general_jump },
    Suite { name: "general-conjugation", description: "eps_Z(-t) S_q eps_Z(t) against the wall-crossing factor", default_samples: 50, tol: 1e-9, run: general_conjugation },
    Suite { name: "adjoint-general", description: "Ad(psi_r) against Psi_r on magnetic generators", default_samples: 50, tol: 1e-8, run: adjoint_general_suite },
    Suite { name: "sq-dt", description: "S_q(ray) against conjugation by the DT product", default_samples: 20, tol: 1e-10, run: sq_dt },
    Suite { name: "hamiltonian-limit", description: "extrapolated (2 pi i tau) log psi against -2 pi i log Delta", default_samples: 20, tol: 1e-5, run: hamiltonian_limit_suite },
    Suite { name: "hamiltonian-derivative", description: "dH/dtheta against -+2 pi i log Lambda, stable under step halving", default_samples: 20, tol: 1e-6, run: hamiltonian_derivative_suite },
    Suite { name: "tau-limit", description: "F(w, 1 -+ theta | 1, 1)^-1 against Upsilon(w, -+theta)", default_samples: 50, tol: 1e-9, run: tau_limit_closed },
    Suite { name: "tau-limit-scaled", description: "F(w, 1 -+ theta | 1, 1)^-1 against w^(-1/12) Upsilon(w, -+theta)", default_samples: 50, tol: 1e-9, run: tau_limit_scaled },
    Suite { name: "upsilon-difference", description: "Upsilon(w, -+(theta + 1/2)) = Upsilon(w, -+(theta - 1/2)) Lambda(w, 1/2 -+ theta | 1)^-+1", default_samples: 50, tol: 1e-9, run: upsilon_difference },
    Suite { name: "tau-limit-extrapolated", description: "extrapolated lim psi along tau = 1 + i 2^-j against F(w, 1 -+ theta | 1, 1)^-1", default_samples: 20, tol: 1e-5, run: tau_limit_extrapolated_suite },
    Suite { name: "poles", description: "located poles and zeros of Psi against t_n = z/(2 pi i (n + theta + (1 + tau)/2)), |n| <= 3", default_samples: 10, tol: 1e-8, run: poles },
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

impl Suite {
    pub fn run(&self, opts: &SuiteOptions) -> Result<VerificationReport> {
        let samples = opts.samples.unwrap_or(self.default_samples);
        let tol = opts.tol.unwrap_or(self.tol);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let outcomes = (self.run)(samples, &mut rng)?;
        Ok(aggregate(self.name, opts.seed, &outcomes, tol))
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<VerificationReport> {
    find_suite(name).ok_or_else(|| Error::invalid(format!("unknown suite '{name}'")))?.run(opts)
}

/// All suites in registry order.
pub fn run_all(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    SUITES.iter().map(|s| s.run(opts)).collect()
}

pub fn aggregate(name: &str, seed: u64, outcomes: &[Outcome], tol: f64) -> VerificationReport {
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    let mut excluded = 0;
    let mut finite = true;
    for o in outcomes {
        match *o {
            Outcome::Residual { abs, rel } => {
                if !abs.is_finite() || !rel.is_finite() {
                    finite = false;
                }
                max_abs = max_abs.max(abs);
                max_rel = max_rel.max(rel);
            }
            Outcome::Excluded => excluded += 1,
        }
    }
    let evaluated = outcomes.len() - excluded;
    VerificationReport {
        suite: name.to_string(),
        seed,
        samples: outcomes.len(),
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        excluded_near_pole: excluded,
        pass: finite && evaluated > 0 && max_rel <= tol,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn polar(rng: &mut ChaCha8Rng, r: (f64, f64), arg: (f64, f64)) -> Complex64 {
    let radius = (rng.gen_range(r.0.ln()..r.1.ln())).exp();
    Complex64::from_polar(radius, rng.gen_range(arg.0..arg.1))
}

fn boxed(rng: &mut ChaCha8Rng, half: f64) -> Complex64 {
    c(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

fn disc(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    loop {
        let v = boxed(rng, r);
        if v.norm() <= r {
            return v;
        }
    }
}

fn tau_sample(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..1.5))
}

/// `|e^d - 1|` with `d` reduced modulo `2 pi i`.
pub fn log_residual(d: Complex64) -> f64 {
    let k = (d.im / (2.0 * PI)).round();
    ((d - c(0.0, 2.0 * PI * k)).exp() - ONE).norm()
}

fn dist_to_integers(u: Complex64) -> f64 {
    (u - u.re.round()).norm()
}

fn dist_to_nonpositive(u: Complex64) -> f64 {
    (u - u.re.round().min(0.0)).norm()
}

fn arg_diff_ok(a: Complex64, b: Complex64) -> bool {
    (a.arg() - b.arg()).abs() < PI - 1e-9
}

fn collect<P: Sync>(params: Vec<P>, f: impl Fn(&P) -> Result<Outcome> + Sync) -> Result<Vec<Outcome>> {
    params
        .par_iter()
        .map(|p| match f(p) {
            Err(e) if e.is_singular() => Ok(Outcome::Excluded),
            other => other,
        })
        .collect()
}

fn ll(w: Complex64, eta: Complex64, omega: Complex64) -> Result<Complex64> {
    log_lambda(&ModifiedGammaArgs::new(w, eta, omega))
}

fn lf(w: Complex64, eta: Complex64, w1: Complex64, w2: Complex64) -> Result<Complex64> {
    log_f(&DoubleGammaArgs { w, eta, omega1: w1, omega2: w2 })
}

fn reflection(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut params = Vec::with_capacity(2 * n);
    for s in [1.0, -1.0] {
        let mut k = 0;
        while k < n {
            let omega = polar(rng, (0.5, 2.0), (-0.75 * PI, 0.75 * PI));
            let u = polar(rng, (0.1, 10.0), (0.01, PI - 0.01));
            let u = if s > 0.0 { u } else { u.conj() };
            let w = u * omega;
            if !arg_diff_ok(w, omega) || !arg_diff_ok(-w, omega) {
                continue;
            }
            params.push((s, w, boxed(rng, 2.0), omega));
            k += 1;
        }
    }
    collect(params, |&(s, w, eta, omega)| {
        if dist_to_integers((w + eta) / omega) < POLE_MARGIN {
            return Ok(Outcome::Excluded);
        }
        let lhs = ll(w, eta, omega)? + ll(-w, omega - eta, omega)?;
        let e = (c(0.0, s * 2.0 * PI) * (w + eta) / omega).exp();
        let rhs = -(ONE - e).ln();
        Ok(Outcome::Residual { abs: (lhs.exp() - rhs.exp()).norm(), rel: log_residual(lhs - rhs) })
    })
}

fn f_difference(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut params = Vec::with_capacity(n);
    while params.len() < n {
        let w1 = polar(rng, (0.5, 2.0), (-0.6 * PI, 0.6 * PI));
        let w2 = w1 * polar(rng, (0.5, 2.0), (-0.45 * PI, 0.45 * PI));
        if w2.im == 0.0 && w2.re < 0.0 || w2.arg().abs() > 0.95 * PI {
            continue;
        }
        let w = polar(rng, (0.2, 5.0), (-0.95 * PI, 0.95 * PI));
        params.push((w, boxed(rng, 1.5), w1, w2));
    }
    collect(params, |&(w, eta, w1, w2)| {
        if dist_to_nonpositive((w + eta) / w1) < POLE_MARGIN {
            return Ok(Outcome::Excluded);
        }
        let d = lf(w, eta + w2, w1, w2)? - lf(w, eta, w1, w2)? + ll(w, eta, w1)?;
        Ok(Outcome::both(log_residual(d)))
    })
}

fn eq_difference(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> = (0..n).map(|_| (disc(rng, 0.9), disc(rng, 3.0))).collect();
    collect(params, |&(q, x)| {
        let a = quantum_dilog(&QDilogArgs { q, x })?;
        let b = quantum_dilog(&QDilogArgs { q, x: q * x })?;
        let expect = ONE - x;
        if expect.norm() < POLE_MARGIN {
            return Ok(Outcome::Excluded);
        }
        Ok(Outcome::Residual { abs: (a - b * expect).norm(), rel: (a / (b * expect) - ONE).norm() })
    })
}

fn eq_series(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> = (0..n).map(|_| (disc(rng, 0.9), disc(rng, 0.5))).collect();
    collect(params, |&(q, x)| {
        let prod = quantum_dilog(&QDilogArgs { q, x })?.inv();
        let series = quantum_dilog_inverse_series(q, x, 4000);
        Ok(Outcome::Residual { abs: (prod - series).norm(), rel: (series / prod - ONE).norm() })
    })
}

/// Observed decay exponent of `|f(w) - asym_K(w)|` between `|w| = r` and `2r`.
pub fn decay_exponent(err: impl Fn(Complex64) -> Result<f64>, w: Complex64) -> Result<f64> {
    let e1 = err(w)?;
    let e2 = err(2.0 * w)?;
    Ok((e1 / e2).log2())
}

fn asymptotic_order(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> = (0..n)
        .map(|_| {
            let dir = Complex64::from_polar(1.0, rng.gen_range(-1.0..1.0));
            let omega = polar(rng, (0.7, 1.4), (-0.5, 0.5));
            let w2 = polar(rng, (0.7, 1.4), (-0.5, 0.5));
            (dir, boxed(rng, 0.5), omega, w2)
        })
        .collect();
    let mut out = Vec::new();
    for k in 1..=3usize {
        out.extend(collect(params.clone(), |&(dir, eta, omega, _)| {
            let w = dir * 24.0;
            let slope =
                decay_exponent(|w| Ok((ll(w, eta, omega)? - asymptotic_log_lambda(w, eta, omega, k)?).norm()), w)?;
            Ok(Outcome::both((slope - (k as f64 + 1.0)).abs()))
        })?);
        out.extend(collect(params.clone(), |&(dir, eta, w1, w2)| {
            let w = dir * 24.0;
            let slope = decay_exponent(|w| Ok((lf(w, eta, w1, w2)? - asymptotic_log_f(w, eta, w1, w2, k)?).norm()), w)?;
            Ok(Outcome::both((slope - (k as f64 + 1.0)).abs()))
        })?);
    }
    Ok(out)
}

/// Optimally truncated large-`|x|` expansion of `log Gamma_2(x | a)`.
pub fn gamma2_direct_expansion(x: Complex64, a: &[Complex64; 2]) -> Result<Complex64> {
    let s = second_stirling_coefficients(c(0.0, 0.0), a, 40)?;
    let inv = x.inv();
    let horner = |coeffs: &[Complex64]| coeffs.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * x + k);
    let mut acc = horner(&s.log_poly) * x.ln() + horner(&s.poly);
    let mut pow = inv;
    let mut prev = [f64::INFINITY; 2];
    for coeff in &s.inverse {
        let term = coeff * pow;
        if term.norm() > prev[0] {
            break;
        }
        acc += term;
        prev = [prev[1], term.norm()];
        pow *= inv;
    }
    Ok(acc)
}

fn gamma2_expansion(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> = (0..n)
        .map(|_| {
            let a = [polar(rng, (0.5, 2.0), (-1.2, 1.2)), polar(rng, (0.5, 2.0), (-1.2, 1.2))];
            (polar(rng, (20.0, 40.0), (-PI / 3.0, PI / 3.0)), a)
        })
        .collect();
    collect(params, |&(x, a)| {
        let rec = log_gamma2(x, a[0], a[1])?;
        let direct = gamma2_direct_expansion(x, &a)?;
        let d = rec - direct;
        let k = (d.im / (2.0 * PI)).round();
        let abs = (d - c(0.0, 2.0 * PI * k)).norm();
        Ok(Outcome::Residual { abs, rel: abs / rec.norm() })
    })
}

fn second_stirling(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> = (0..n).map(|_| (polar(rng, (0.3, 3.0), (-2.5, 2.5)), boxed(rng, 2.0))).collect();
    collect(params, |&(a, delta)| {
        let s = second_stirling_coefficients(delta, &[a], 4)?;
        // ((x + delta)/a - 1/2) log x - x/a + sum_k (-1)^{k+1} a^k B_{k+1}(delta/a) / (k(k+1)) x^{-k}
        let mut worst: f64 = 0.0;
        let mut check = |got: Complex64, want: Complex64| {
            worst = worst.max((got - want).norm() / (1.0 + want.norm()));
        };
        check(s.log_poly[0], delta / a - 0.5);
        check(s.log_poly[1], a.inv());
        check(s.poly[0], c(0.0, 0.0));
        check(s.poly[1], -a.inv());
        for k in 1..=4usize {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let want = a.powu(k as u32) * classical_bernoulli(k + 1, delta / a) * (sign / (k * (k + 1)) as f64);
            check(s.inverse[k - 1], want);
        }
        Ok(Outcome::both(worst))
    })
}

fn constants_suite(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(25.0..60.0)).collect();
    // zeta'(-1) = 1/12 - log A, A the Glaisher-Kinkelin constant
    let glaisher: f64 = 1.282_427_129_100_622_6;
    let zp = zeta_prime_minus_one();
    let mut out = vec![
        Outcome::both((zp - (1.0 / 12.0 - glaisher.ln())).abs()),
        Outcome::both((zp - zeta_prime_em(-1.0, 80, 24)).abs()),
    ];
    let ln_rho = constants().rho.ln();
    out.extend(collect(xs, |&x| {
        let x = c(x, 0.0);
        let direct = gamma2_direct_expansion(x, &[ONE, ONE])?;
        let closed = -ln_rho - log_barnes_g(x)? + 0.5 * x * (2.0 * PI).ln();
        let abs = (direct - closed).norm();
        Ok(Outcome::Residual { abs, rel: abs / closed.norm() })
    })?);
    Ok(out)
}

struct A1Sample {
    z: Complex64,
    t: Complex64,
    tau: Complex64,
    theta: Complex64,
}

fn a1_sample(rng: &mut ChaCha8Rng, positive: Option<bool>) -> A1Sample {
    loop {
        let z = polar(rng, (0.5, 2.0), (-PI, PI));
        let t = polar(rng, (0.1, 10.0), (-PI, PI));
        let tau = c(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..1.5));
        let theta = disc(rng, 1.0);
        let re = (t / z).re;
        let ok = match positive {
            Some(true) => re > 0.0,
            Some(false) => re < 0.0,
            None => true,
        };
        if ok && re.abs() > 1e-6 * (t / z).norm() {
            return A1Sample { z, t, tau, theta };
        }
    }
}

/// True if `w + 1/2 - xi` is within the margin of an integer; these are the
/// poles and zeros of both sheets and of the jump factor.
fn near_a1_singularity(s: &A1Sample) -> bool {
    let w = w_of(s.z, s.t);
    dist_to_integers(w + 0.5 - s.theta - s.tau / 2.0) < POLE_MARGIN
}

fn jump_a1(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut params: Vec<A1Sample> = (0..n).map(|_| a1_sample(rng, Some(true))).collect();
    params.extend((0..n).map(|_| a1_sample(rng, Some(false))));
    collect(params, |s| {
        if near_a1_singularity(s) {
            return Ok(Outcome::Excluded);
        }
        Ok(Outcome::both(verify_jump_a1(s.z, s.t, s.tau, s.theta)?))
    })
}

/// True if a factor `Lambda(+-w, 1/2 -+ theta - (j + 1/2) tau)`, `j < n`, of
/// the `y_{n alpha_dual}` multiplier is within the margin of a pole or zero.
fn near_sheet_singularity(s: &A1Sample, side: Side, n: i64) -> bool {
    let sg = side.sign();
    let w = w_of(s.z, s.t) * sg;
    (0..n).any(|j| dist_to_integers(w + 0.5 - sg * s.theta - (j as f64 + 0.5) * s.tau) < POLE_MARGIN)
}

fn a1_algebra(z: Complex64) -> Result<(RefinedBPSStructure, ExtendedAlgebra)> {
    let b = doubled_a1(z)?;
    let s = em_splitting(&b, None)?;
    let alg = ExtendedAlgebra::new(&b, &s)?;
    Ok((b, alg))
}

fn side_ok(s: &A1Sample, side: Side) -> bool {
    let w = w_of(s.z, s.t) * side.sign();
    !(w.re < 0.0 && w.im.abs() < 1e-6 * w.norm())
}

/// `psi_+-` as a coefficient function of `(tau, theta)` for fixed `z, t`.
pub fn psi_a1_function(z: Complex64, t: Complex64, side: Side) -> CoefficientFunction {
    let w = w_of(z, t) * side.sign();
    let half = CoefficientFunction::real(0.5);
    let tau = CoefficientFunction::tau();
    let theta = CoefficientFunction::theta(vec![1]);
    let signed = CoefficientFunction::real(side.sign()) * theta;
    let eta = &(&half + &(&half * &tau)) - &signed;
    CoefficientFunction::f(&CoefficientFunction::constant(w), &eta, &CoefficientFunction::one(), &tau).inv()
}

fn adjoint_a1(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> =
        (0..n).map(|i| (a1_sample(rng, None), if i % 2 == 0 { Side::Plus } else { Side::Minus })).collect();
    collect(params, |(s, side)| {
        if !side_ok(s, *side) || near_sheet_singularity(s, *side, 1) {
            return Ok(Outcome::Excluded);
        }
        let (_, alg) = a1_algebra(s.z)?;
        let psi = psi_a1_function(s.z, s.t, *side);
        let m = ad(&psi, &alg).generators[0].eval(s.tau, &[s.theta])?;
        let direct = solve_a1(s.z, &EvaluationPoint::new(s.t, *side, s.tau, s.theta), 1)?;
        Ok(Outcome::Residual { abs: (m - direct).norm(), rel: (m / direct - ONE).norm() })
    })
}

fn powers_a1(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> =
        (0..n).map(|i| (a1_sample(rng, None), if i % 2 == 0 { Side::Plus } else { Side::Minus })).collect();
    collect(params, |(s, side)| {
        if !side_ok(s, *side) || near_sheet_singularity(s, *side, 2) {
            return Ok(Outcome::Excluded);
        }
        let p = EvaluationPoint::new(s.t, *side, s.tau, s.theta);
        let shifted = EvaluationPoint::new(s.t, *side, s.tau, s.theta + s.tau);
        // (K(theta) y) * (K(theta) y) = K(theta) K(theta + tau) y^2
        let product = solve_a1(s.z, &p, 1)? * solve_a1(s.z, &shifted, 1)?;
        let direct = solve_a1(s.z, &p, 2)?;
        Ok(Outcome::Residual { abs: (product - direct).norm(), rel: (product / direct - ONE).norm() })
    })
}

fn limit_params(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Complex64, Side, Complex64, Complex64)> {
    (0..n)
        .map(|i| {
            let z = polar(rng, (0.5, 2.0), (-PI, PI));
            let side = if i % 2 == 0 { Side::Plus } else { Side::Minus };
            (z, side, tau_sample(rng), disc(rng, 1.0))
        })
        .collect()
}

fn limit_zero(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(limit_params(n, rng), |&(z, side, tau, theta)| {
        let r = verify_limits_a1(z, side, tau, theta, None)?;
        let res = if r.monotone_tail { r.zero_limit_residual } else { f64::INFINITY };
        Ok(Outcome::both(res))
    })
}

fn limit_growth(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(limit_params(n, rng), |&(z, side, tau, theta)| {
        let r = verify_limits_a1(z, side, tau, theta, None)?;
        Ok(Outcome::both(r.growth_exponent))
    })
}

fn general_a1(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params: Vec<_> = (0..n)
        .map(|_| {
            let s = a1_sample(rng, None);
            let r = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
            // a point of H_r
            let t = r * polar(rng, (0.1, 10.0), (-1.4, 1.4));
            (A1Sample { t, ..s }, r)
        })
        .collect();
    collect(params, |(s, r)| {
        let inst = RHInstance::new(doubled_a1(s.z)?)?;
        let ray = Ray::direction(*r)?;
        let side = if (s.z / (c(0.0, 1.0) * ray.phase)).re > 0.0 { Side::Plus } else { Side::Minus };
        if near_sheet_singularity(s, side, 1) {
            return Ok(Outcome::Excluded);
        }
        let beta = Charge(vec![0, 1]);
        let g = log_solve_general(&inst, &ray, s.t, s.tau, &[s.theta], &beta)?;
        let d = log_solve_a1(s.z, &EvaluationPoint::new(s.t, side, s.tau, s.theta), 1)?;
        Ok(Outcome::both(log_residual(g - d)))
    })
}

/// Test structures for the general solution: doubled A1, the same with
/// pairing 2, and a rank 4 sum with a refined piece `Omega = L^{-1/2} + L^{1/2}`.
pub fn general_structures(z: &[Complex64; 2]) -> Result<Vec<RefinedBPSStructure>> {
    let a1 = doubled_a1(z[0])?;
    let mut omega = std::collections::BTreeMap::new();
    omega.insert(Charge(vec![1, 0]), LaurentPoly::constant(1));
    omega.insert(Charge(vec![-1, 0]), LaurentPoly::constant(1));
    let paired = RefinedBPSStructure::new(vec![vec![0, -2], vec![2, 0]], vec![z[0], c(0.0, 0.0)], omega)?;
    let mut omega2 = std::collections::BTreeMap::new();
    let refined = LaurentPoly::from_terms([(-1, 1.into()), (1, 1.into())]);
    omega2.insert(Charge(vec![1, 0]), refined.clone());
    omega2.insert(Charge(vec![-1, 0]), refined);
    let second = RefinedBPSStructure::new(vec![vec![0, -1], vec![1, 0]], vec![z[1], c(0.0, 0.0)], omega2)?;
    Ok(vec![a1, paired, direct_sum(&[doubled_a1(z[0])?, second])?])
}

struct GeneralSample {
    inst: RHInstance,
    ray_index: usize,
    t: Complex64,
    tau: Complex64,
    theta: Vec<Complex64>,
}

fn general_samples(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<GeneralSample>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let z = [polar(rng, (0.5, 2.0), (-PI, PI)), polar(rng, (0.5, 2.0), (-PI, PI))];
        let structures = general_structures(&z)?;
        let b = structures[i % structures.len()].clone();
        let inst = RHInstance::new(b)?;
        let ray_index = rng.gen_range(0..inst.rays.len());
        let phase = inst.rays[ray_index].phase;
        // t in H_ray, away from its boundary
        let t = phase * polar(rng, (0.2, 5.0), (-1.2, 1.2));
        let dim = inst.splitting.theta_space_dim();
        let theta = (0..dim).map(|_| disc(rng, 0.5)).collect();
        out.push(GeneralSample { inst, ray_index, t, tau: tau_sample(rng), theta });
    }
    Ok(out)
}

/// Largest perturbation angle used to move off an active ray.
pub const RAY_PERTURBATION: f64 = 1e-3;

/// Angle, at most `wanted`, by which `ray` can be rotated either way without
/// meeting the line of another active class. `None` if the nearest such line
/// is closer than `1e-8`.
pub fn safe_rotation(inst: &RHInstance, ray: &Ray, wanted: f64) -> Option<f64> {
    let mut gap = f64::INFINITY;
    for (g, _) in inst.structure.active_classes() {
        let d = (inst.structure.z(g) / ray.phase).arg().abs();
        let d = d.min(PI - d);
        if d > 1e-12 {
            gap = gap.min(d);
        }
    }
    let angle = wanted.min(0.5 * gap);
    (angle >= 1e-8).then_some(angle)
}

fn general_jump(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params = general_samples(n, rng)?;
    collect(params, |s| {
        let ray = &s.inst.rays[s.ray_index];
        let Some(angle) = safe_rotation(&s.inst, ray, RAY_PERTURBATION) else {
            return Ok(Outcome::Excluded);
        };
        let (r_plus, r_minus) = perturbed_rays(ray, angle)?;
        let mut worst: f64 = 0.0;
        for m in &s.inst.splitting.magnetic_basis {
            let plus = log_solve_general(&s.inst, &r_plus, s.t, s.tau, &s.theta, m)?;
            let minus = log_solve_general(&s.inst, &r_minus, s.t, s.tau, &s.theta, m)?;
            let jump = jump_factor(&s.inst, ray, s.t, s.tau, &s.theta, m)?;
            if jump.norm() < POLE_MARGIN || jump.norm() > 1.0 / POLE_MARGIN {
                return Ok(Outcome::Excluded);
            }
            worst = worst.max(log_residual(plus - minus - jump.ln()));
        }
        Ok(Outcome::both(worst))
    })
}

fn general_conjugation(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params = general_samples(n, rng)?;
    collect(params, |s| {
        let b = &s.inst.structure;
        let ray = &s.inst.rays[s.ray_index];
        let alg = ExtendedAlgebra::new(b, &s.inst.splitting)?;
        let sq = s_q_ray(b, &s.inst.splitting, &s.inst.refinement, ray)?;
        let conj =
            eps_z(b, &s.inst.splitting, -s.t)?.compose(&sq, &alg)?.compose(&eps_z(b, &s.inst.splitting, s.t)?, &alg)?;
        let mut worst: f64 = 0.0;
        for (j, m) in s.inst.splitting.magnetic_basis.iter().enumerate() {
            let got = conj.generators[j].eval(s.tau, &s.theta)?;
            let want = jump_factor(&s.inst, ray, s.t, s.tau, &s.theta, m)?;
            worst = worst.max((got / want - ONE).norm());
        }
        Ok(Outcome::both(worst))
    })
}

/// `psi_r` as a coefficient function of `(tau, theta)` for fixed `t`.
pub fn psi_general_function(inst: &RHInstance, r: &Ray, t: Complex64) -> Result<CoefficientFunction> {
    let tau = CoefficientFunction::tau();
    let mut acc = CoefficientFunction::one();
    for (g, poly) in inst.structure.active_classes() {
        if (inst.structure.z(g) / (c(0.0, 1.0) * r.phase)).re <= 0.0 {
            continue;
        }
        let w = CoefficientFunction::constant(w_of(inst.structure.z(g), t));
        let (e, _) = inst.splitting.coordinates(g)?;
        let th = CoefficientFunction::theta(e);
        for (n, om) in poly.terms() {
            let eta =
                &(&CoefficientFunction::real(0.5) + &(&CoefficientFunction::real((n as f64 + 1.0) / 2.0) * &tau)) - &th;
            let f = CoefficientFunction::f(&w, &eta, &CoefficientFunction::one(), &tau);
            acc = &acc * &f.powi(-(om.to_integer() as i32));
        }
    }
    Ok(acc)
}

fn adjoint_general_suite(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params = general_samples(n, rng)?;
    collect(params, |s| {
        let ray = &s.inst.rays[s.ray_index];
        // a non-active ray with t in its half-plane
        let Some(angle) = safe_rotation(&s.inst, ray, 0.3) else {
            return Ok(Outcome::Excluded);
        };
        let (r, _) = perturbed_rays(ray, angle)?;
        let alg = ExtendedAlgebra::new(&s.inst.structure, &s.inst.splitting)?;
        let psi = psi_general_function(&s.inst, &r, s.t)?;
        // cross-check the expression tree against the direct evaluation
        let direct_psi = log_adjoint_general(&s.inst, &r, s.t, s.tau, &s.theta)?;
        let tree_psi = psi.eval(s.tau, &s.theta)?;
        let mut worst = (tree_psi / direct_psi.exp() - ONE).norm();
        let adj = ad(&psi, &alg);
        for (j, m) in s.inst.splitting.magnetic_basis.iter().enumerate() {
            let got = adj.generators[j].eval(s.tau, &s.theta)?;
            let want = log_solve_general(&s.inst, &r, s.t, s.tau, &s.theta, m)?;
            worst = worst.max(log_residual(got.ln() - want));
        }
        Ok(Outcome::both(worst))
    })
}

fn sq_dt(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let params = general_samples(n, rng)?;
    collect(params, |s| {
        let b = &s.inst.structure;
        let ray = &s.inst.rays[s.ray_index];
        let alg = ExtendedAlgebra::new(b, &s.inst.splitting)?;
        let sq = s_q_ray(b, &s.inst.splitting, &s.inst.refinement, ray)?;
        let mut worst: f64 = 0.0;
        for j in 0..alg.magnetic_dim() {
            let got = sq.generators[j].eval(s.tau, &s.theta)?;
            let want = dt_adjoint_multiplier(b, &alg, ray, j, s.tau, &s.theta)?;
            worst = worst.max((got / want - ONE).norm());
        }
        Ok(Outcome::both(worst))
    })
}

/// Sample `(z, t, theta, side)` with `w + eta`, `w = +-z/(2 pi i t)` and
/// `eta = 1/2 -+ theta`, kept away from the closed third quadrant where the
/// poles `-k - l tau` of the `tau`-dependent factors accumulate as `tau -> 0`
/// along the imaginary axis.
fn hamiltonian_params(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Complex64, Complex64, Complex64, Side)> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let side = if out.len() % 2 == 0 { Side::Plus } else { Side::Minus };
        let z = polar(rng, (0.5, 2.0), (-PI, PI));
        let w = polar(rng, (0.3, 3.0), (-1.5, 2.6));
        let theta = disc(rng, 0.4);
        let u = w + 0.5 - side.sign() * theta;
        if u.re < 0.1 && u.im < 0.1 {
            continue;
        }
        let t = z * side.sign() / (c(0.0, 2.0 * PI) * w);
        out.push((z, t, theta, side));
    }
    out
}

fn hamiltonian_limit_suite(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(hamiltonian_params(n, rng), |&(z, t, theta, side)| {
        let h = hamiltonian_limit(z, t, theta, side)?;
        let e = hamiltonian_extrapolated(z, t, theta, side, &ExtrapolationConfig::default())?;
        // H is defined modulo (2 pi i)(2 pi i) k
        let d = h - e;
        let k = (d.re / (-4.0 * PI * PI)).round();
        let abs = (d + 4.0 * PI * PI * k).norm();
        Ok(Outcome::Residual { abs, rel: abs / (1.0 + h.norm()) })
    })
}

fn hamiltonian_derivative_suite(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(hamiltonian_params(n, rng), |&(z, t, theta, side)| {
        let want = hamiltonian_derivative_closed(z, t, theta, side)?;
        let mut worst: f64 = 0.0;
        for h in [1e-4, 5e-5] {
            let got = hamiltonian_derivative(z, t, theta, side, h)?;
            let d = got - want;
            // log Lambda is defined modulo 2 pi i
            let k = (d.re / (4.0 * PI * PI * side.sign())).round();
            let abs = (d - 4.0 * PI * PI * side.sign() * k).norm();
            worst = worst.max(abs / (1.0 + want.norm()));
        }
        Ok(Outcome::both(worst))
    })
}

fn tau_params(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Complex64, Complex64, Complex64, Side)> {
    hamiltonian_params(n, rng)
}

fn tau_limit_closed(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(tau_params(n, rng), |&(z, t, theta, side)| {
        let l = tau_function_limit(z, t, theta, side)?;
        Ok(Outcome::Residual { abs: (l.psi_limit - l.upsilon).norm(), rel: (l.psi_limit / l.upsilon - ONE).norm() })
    })
}

fn tau_limit_scaled(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(tau_params(n, rng), |&(z, t, theta, side)| {
        let l = tau_function_limit(z, t, theta, side)?;
        Ok(Outcome::Residual {
            abs: (l.psi_limit - l.scaled_upsilon).norm(),
            rel: (l.psi_limit / l.scaled_upsilon - ONE).norm(),
        })
    })
}

fn upsilon_difference(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(tau_params(n, rng), |&(z, t, theta, side)| {
        let s = side.sign();
        let w = w_of(z, t) * s;
        let d = log_upsilon(w, -s * (theta + 0.5))? - log_upsilon(w, -s * (theta - 0.5))?
            + s * ll(w, 0.5 - s * theta, ONE)?;
        Ok(Outcome::both(log_residual(d)))
    })
}

fn tau_limit_extrapolated_suite(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    collect(tau_params(n, rng), |&(z, t, theta, side)| {
        let l = tau_function_limit(z, t, theta, side)?;
        let e = tau_limit_extrapolated(z, t, theta, side, 3, 4)?;
        Ok(Outcome::Residual { abs: (e - l.psi_limit).norm(), rel: (e / l.psi_limit - ONE).norm() })
    })
}

fn poles(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut params = Vec::with_capacity(7 * n);
    for _ in 0..n {
        let z = polar(rng, (0.5, 2.0), (-PI, PI));
        let tau = tau_sample(rng);
        let theta = disc(rng, 0.5);
        for k in -3..=3 {
            params.push((z, tau, theta, k));
        }
    }
    collect(params, |&(z, tau, theta, k)| {
        let tn = predicted_singularity(z, tau, theta, k);
        let (side, kind) = singularity_kind(k);
        let p = EvaluationPoint::new(tn, side, tau, theta);
        if log_solve_a1(z, &p, 1).is_err() && !matches!(log_solve_a1(z, &p, 1), Err(Error::Pole { .. })) {
            return Ok(Outcome::Excluded);
        }
        let guess = tn * (1.0 + 1e-3 * Complex64::from_polar(1.0, 0.7));
        let found = locate_singularity(z, side, tau, theta, guess, kind)?;
        let abs = (found - tn).norm();
        Ok(Outcome::Residual { abs, rel: abs })
    })
}
