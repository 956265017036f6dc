//! Grading-preserving automorphisms of the extended quantum torus, stored by
//! their multipliers on the magnetic generators.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bps::EMSplitting;
use crate::bps::{classify, kappa_from_pairing, QuadraticRefinement, Ray, RefinedBPSStructure};
use crate::error::{Error, Result};
use crate::qtorus::expr::CoefficientFunction;
use crate::qtorus::extended::{ExtendedAlgebra, ExtendedElement};
use crate::special::{quantum_dilog, QDilogArgs};

/// `f(tau, theta) y_delta -> f(tau, theta + c) K_delta(tau, theta) y_delta`,
/// where `K_{m_j} = generators[j]` on the magnetic basis and `c` is the
/// optional translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedAutomorphism {
    pub generators: Vec<CoefficientFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<[f64; 2]>>,
}

fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl GradedAutomorphism {
    pub fn identity(alg: &ExtendedAlgebra) -> Self {
        Self { generators: vec![CoefficientFunction::one(); alg.magnetic_dim()], translation: None }
    }

    pub fn translation(&self) -> Option<Vec<Complex64>> {
        self.translation.as_deref().map(from_pairs)
    }

    fn translate(&self, f: &CoefficientFunction) -> CoefficientFunction {
        match self.translation() {
            Some(c) => f.shifted(&[], &c),
            None => f.clone(),
        }
    }

    fn check(&self, alg: &ExtendedAlgebra) -> Result<()> {
        if self.generators.len() != alg.magnetic_dim() {
            return Err(Error::DimensionMismatch { expected: alg.magnetic_dim(), found: self.generators.len() });
        }
        if let Some(c) = &self.translation {
            if c.len() != alg.theta_dim() {
                return Err(Error::DimensionMismatch { expected: alg.theta_dim(), found: c.len() });
            }
        }
        Ok(())
    }

    /// `K_delta` with `A(y_delta) = K_delta y_delta`, built from the generator
    /// images through the twisted product.
    pub fn multiplier(&self, alg: &ExtendedAlgebra, delta: &[i64]) -> Result<CoefficientFunction> {
        self.check(alg)?;
        if delta.len() != alg.magnetic_dim() {
            return Err(Error::DimensionMismatch { expected: alg.magnetic_dim(), found: delta.len() });
        }
        let mut k = CoefficientFunction::one();
        let mut reached = vec![0i64; delta.len()];
        for (j, &n) in delta.iter().enumerate() {
            let step = n.signum();
            for _ in 0..n.abs() {
                let mut basis = vec![0i64; delta.len()];
                basis[j] = 1;
                let here = alg.shift_of(&reached);
                if step > 0 {
                    k = &k * &self.generators[j].shifted(&here, &[]);
                } else {
                    let back: Vec<i64> = here.iter().zip(alg.shift_of(&basis)).map(|(a, b)| a - b).collect();
                    k = &k / &self.generators[j].shifted(&back, &[]);
                }
                reached[j] += step;
            }
        }
        Ok(k)
    }

    pub fn apply(&self, alg: &ExtendedAlgebra, x: &ExtendedElement) -> Result<ExtendedElement> {
        let mut out = ExtendedElement::zero();
        for (d, f) in x.terms() {
            let k = self.multiplier(alg, d)?;
            out.add_term(d.clone(), &self.translate(f) * &k);
        }
        Ok(out)
    }

    /// `self o other`.
    pub fn compose(&self, other: &GradedAutomorphism, alg: &ExtendedAlgebra) -> Result<Self> {
        self.check(alg)?;
        other.check(alg)?;
        let generators = self.generators.iter().zip(&other.generators).map(|(a, b)| &self.translate(b) * a).collect();
        let translation = match (self.translation(), other.translation()) {
            (None, None) => None,
            (Some(c), None) | (None, Some(c)) => Some(c),
            (Some(a), Some(b)) => Some(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
        };
        Ok(Self { generators, translation: translation.map(|c| to_pairs(&c)) })
    }

    pub fn inverse(&self, alg: &ExtendedAlgebra) -> Result<Self> {
        self.check(alg)?;
        let neg: Option<Vec<Complex64>> = self.translation().map(|c| c.iter().map(|x| -x).collect());
        let generators = self
            .generators
            .iter()
            .map(|g| match &neg {
                Some(c) => g.shifted(&[], c).inv(),
                None => g.inv(),
            })
            .collect();
        Ok(Self { generators, translation: neg.map(|c| to_pairs(&c)) })
    }
}

/// `epsilon_Z(t)`: translation `theta(gamma_e) -> theta(gamma_e) + Z(gamma_e)/(2 pi i t)`
/// on coefficients and `y_delta -> e^{Z(delta)/t} y_delta` on magnetic classes.
pub fn eps_z(b: &RefinedBPSStructure, s: &EMSplitting, t: Complex64) -> Result<GradedAutomorphism> {
    if t.norm() == 0.0 || !t.norm().is_finite() {
        return Err(Error::invalid("t must be non-zero and finite"));
    }
    let alg = ExtendedAlgebra::new(b, s)?;
    let two_pi_i_t = Complex64::new(0.0, 2.0 * PI) * t;
    let shift: Vec<Complex64> = alg.splitting().electric_basis.iter().map(|e| b.z(e) / two_pi_i_t).collect();
    let generators =
        alg.splitting().magnetic_basis.iter().map(|m| CoefficientFunction::constant((b.z(m) / t).exp())).collect();
    Ok(GradedAutomorphism { generators, translation: Some(to_pairs(&shift)) })
}

fn require_conditions(b: &RefinedBPSStructure) -> Result<()> {
    let c = classify(b);
    if !c.all() {
        return Err(Error::Unsupported(format!(
            "structure must be finite, uncoupled, palindromic and integral (got {c:?})"
        )));
    }
    Ok(())
}

/// Check `Omega_n(gamma) != 0 => sigma(gamma) = (-1)^{n+1}` for the classes on `ray`.
pub fn check_refinement(b: &RefinedBPSStructure, sigma: &QuadraticRefinement, ray: &Ray) -> Result<()> {
    for g in &ray.classes {
        for (n, c) in b.omega(g).terms() {
            if c != 0.into() {
                let want = if n.rem_euclid(2) == 1 { 1 } else { -1 };
                if sigma.sign(g) != want {
                    return Err(Error::Inconsistent(format!(
                        "sigma({g}) = {} but Omega_{n}({g}) = {c} requires {want}",
                        sigma.sign(g)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn integer_omega(c: num_rational::Rational64) -> Result<i32> {
    if !c.is_integer() {
        return Err(Error::Unsupported(format!("non-integral BPS invariant {c}")));
    }
    c.to_integer().to_i32().ok_or_else(|| Error::Unsupported(format!("BPS invariant {c} out of range")))
}

/// `S_q(ray)`: on `y_beta` multiplies by
/// `prod_gamma prod_{lambda in kappa} prod_n (1 + q^{n/2 + lambda} y_gamma)^{-Omega_n(gamma) eps(beta, gamma)}`.
pub fn s_q_ray(
    b: &RefinedBPSStructure,
    s: &EMSplitting,
    sigma: &QuadraticRefinement,
    ray: &Ray,
) -> Result<GradedAutomorphism> {
    require_conditions(b)?;
    if ray.classes.is_empty() {
        return Err(Error::invalid("ray carries no active classes"));
    }
    check_refinement(b, sigma, ray)?;
    let alg = ExtendedAlgebra::new(b, s)?;
    let mut generators = Vec::with_capacity(alg.magnetic_dim());
    for m in &alg.splitting().magnetic_basis {
        let mut k = CoefficientFunction::one();
        for g in &ray.classes {
            let (e, _) = alg.splitting().coordinates(g)?;
            let (eps, kappa) = kappa_from_pairing(b.pairing(m, g));
            for (n, c) in b.omega(g).terms() {
                let power = -integer_omega(c)? * eps as i32;
                for lambda in &kappa {
                    let f = electric_factor(&e, n as f64 / 2.0 + lambda.value(), None);
                    k = &k * &f.powi(power);
                }
            }
        }
        generators.push(k);
    }
    Ok(GradedAutomorphism { generators, translation: None })
}

/// `1 + exp(2 pi i (theta(gamma) + a tau) + extra)`.
pub(crate) fn electric_factor(e: &[i64], a: f64, extra: Option<Complex64>) -> CoefficientFunction {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut arg = CoefficientFunction::constant(two_pi_i * a) * CoefficientFunction::tau()
        + CoefficientFunction::constant(two_pi_i) * CoefficientFunction::theta(e.to_vec());
    if let Some(x) = extra {
        arg = arg + CoefficientFunction::constant(x);
    }
    CoefficientFunction::one() + arg.exp()
}

/// `Ad_u`: `y_delta -> u(theta) u(theta + tau <delta, ->)^{-1} y_delta`.
pub fn ad(u: &CoefficientFunction, alg: &ExtendedAlgebra) -> GradedAutomorphism {
    let generators = (0..alg.magnetic_dim())
        .map(|j| {
            let mut basis = vec![0i64; alg.magnetic_dim()];
            basis[j] = 1;
            u / &u.shifted(&alg.shift_of(&basis), &[])
        })
        .collect();
    GradedAutomorphism { generators, translation: None }
}

/// Multiplier of `DT_q(ray) y_{m_j} DT_q(ray)^{-1}` at `(tau, theta)`, with
/// `DT_q(ray) = prod_gamma prod_n E_q(-q^{(n+1)/2} y_gamma)^{-Omega_n(gamma)}`
/// evaluated through the infinite products.
pub fn dt_adjoint_multiplier(
    b: &RefinedBPSStructure,
    alg: &ExtendedAlgebra,
    ray: &Ray,
    j: usize,
    tau: Complex64,
    theta: &[Complex64],
) -> Result<Complex64> {
    if j >= alg.magnetic_dim() {
        return Err(Error::invalid(format!("no magnetic generator {j}")));
    }
    let mut basis = vec![0i64; alg.magnetic_dim()];
    basis[j] = 1;
    let shift = alg.shift_of(&basis);
    let shifted: Vec<Complex64> = theta.iter().zip(&shift).map(|(t, s)| t + tau * *s as f64).collect();
    let i = Complex64::i();
    let q = (2.0 * PI * i * tau).exp();
    let dt = |th: &[Complex64]| -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for g in &ray.classes {
            let (e, _) = alg.splitting().coordinates(g)?;
            let th_g: Complex64 = e.iter().zip(th).map(|(c, t)| t * *c as f64).sum();
            let y = (2.0 * PI * i * th_g).exp();
            for (n, c) in b.omega(g).terms() {
                let x = -(PI * i * (n as f64 + 1.0) * tau).exp() * y;
                acc *= quantum_dilog(&QDilogArgs { q, x })?.powi(-integer_omega(c)?);
            }
        }
        Ok(acc)
    };
    Ok(dt(theta)? / dt(&shifted)?)
}
