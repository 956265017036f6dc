//! The extended quantum torus `sum_{delta in Gamma_m} M(H x V_e) y_delta`
//! attached to an electric/magnetic splitting, and the embedding of the
//! ordinary quantum torus into it.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bps::{em_splitting, Charge, EMSplitting, RefinedBPSStructure};
use crate::error::{Error, Result};
use crate::qtorus::expr::{CoefficientFunction, SamplePoint};
use crate::qtorus::torus::QuantumTorusElement;

/// Splitting data needed for products: the skew form and the vectors
/// `<m_j, e_i>` for magnetic basis `m_j` and electric basis `e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedAlgebra {
    splitting: EMSplitting,
    skew_form: Vec<Vec<i64>>,
    shifts: Vec<Vec<i64>>,
}

impl ExtendedAlgebra {
    pub fn new(b: &RefinedBPSStructure, s: &EMSplitting) -> Result<Self> {
        let splitting = em_splitting(b, Some(s.clone()))?;
        let shifts = splitting
            .magnetic_basis
            .iter()
            .map(|m| splitting.electric_basis.iter().map(|e| b.pairing(m, e)).collect())
            .collect();
        Ok(Self { splitting, skew_form: b.skew_form().to_vec(), shifts })
    }

    pub fn splitting(&self) -> &EMSplitting {
        &self.splitting
    }

    pub fn theta_dim(&self) -> usize {
        self.splitting.theta_space_dim()
    }

    pub fn magnetic_dim(&self) -> usize {
        self.splitting.magnetic_dim()
    }

    /// `<delta, -> in V_e` for `delta` in magnetic coordinates.
    pub fn shift_of(&self, delta: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.theta_dim()];
        for (d, row) in delta.iter().zip(&self.shifts) {
            for (o, s) in out.iter_mut().zip(row) {
                *o += d * s;
            }
        }
        out
    }

    fn check(&self, a: &ExtendedElement) -> Result<()> {
        for d in a.terms.keys() {
            if d.len() != self.magnetic_dim() {
                return Err(Error::DimensionMismatch { expected: self.magnetic_dim(), found: d.len() });
            }
        }
        Ok(())
    }

    /// `(f1 y_d1) * (f2 y_d2) = f1(theta) f2(theta + tau <d1, ->) y_{d1 + d2}`.
    pub fn mul(&self, a: &ExtendedElement, b: &ExtendedElement) -> Result<ExtendedElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = ExtendedElement::zero();
        for (d1, f1) in &a.terms {
            let shift = self.shift_of(d1);
            for (d2, f2) in &b.terms {
                let d: Vec<i64> = d1.iter().zip(d2).map(|(x, y)| x + y).collect();
                out.add_term(d, f1 * &f2.shifted(&shift, &[]));
            }
        }
        Ok(out)
    }

    /// `exp(pi i (k + <gamma_m, gamma_e>) tau + 2 pi i theta(gamma_e)) y_{gamma_m}`
    /// for `q^{k/2} y_gamma`.
    pub fn embed_monomial(&self, gamma: &Charge, k: i32) -> Result<(Vec<i64>, CoefficientFunction)> {
        let (e, m) = self.splitting.coordinates(gamma)?;
        let ge = self.splitting.electric_from(&e);
        let gm = self.splitting.magnetic_from(&m);
        let twist = pair(&self.skew_form, &gm, &ge);
        let tau_coeff = Complex64::new(0.0, PI * (k as f64 + twist as f64));
        let mut exponent = CoefficientFunction::constant(tau_coeff) * CoefficientFunction::tau();
        if e.iter().any(|&c| c != 0) {
            exponent =
                exponent + CoefficientFunction::constant(Complex64::new(0.0, 2.0 * PI)) * CoefficientFunction::theta(e);
        }
        Ok((m, exponent.exp()))
    }

    /// The injective ring homomorphism from the quantum torus.
    pub fn embed(&self, a: &QuantumTorusElement) -> Result<ExtendedElement> {
        let mut out = ExtendedElement::zero();
        for (gamma, poly) in a.terms() {
            for (k, c) in poly.terms() {
                let (m, f) = self.embed_monomial(gamma, k)?;
                out.add_term(m, CoefficientFunction::constant(c) * f);
            }
        }
        Ok(out)
    }
}

fn pair(form: &[Vec<i64>], a: &Charge, b: &Charge) -> i64 {
    let mut acc = 0;
    for (i, row) in form.iter().enumerate() {
        for (j, m) in row.iter().enumerate() {
            acc += a.0[i] * m * b.0[j];
        }
    }
    acc
}

pub fn ext_mul(alg: &ExtendedAlgebra, a: &ExtendedElement, b: &ExtendedElement) -> Result<ExtendedElement> {
    alg.mul(a, b)
}

pub fn embed(a: &QuantumTorusElement, alg: &ExtendedAlgebra) -> Result<ExtendedElement> {
    alg.embed(a)
}

/// `sum_delta f_delta(tau, theta) y_delta`, keyed by magnetic coordinates.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct ExtendedElement {
    terms: BTreeMap<Vec<i64>, CoefficientFunction>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    delta: Vec<i64>,
    coeff: CoefficientFunction,
}

impl From<Vec<Term>> for ExtendedElement {
    fn from(v: Vec<Term>) -> Self {
        let mut out = ExtendedElement::zero();
        for t in v {
            out.add_term(t.delta, t.coeff);
        }
        out
    }
}

impl From<ExtendedElement> for Vec<Term> {
    fn from(e: ExtendedElement) -> Self {
        e.terms.into_iter().map(|(delta, coeff)| Term { delta, coeff }).collect()
    }
}

impl ExtendedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `f y_delta`.
    pub fn monomial(delta: Vec<i64>, f: CoefficientFunction) -> Self {
        let mut out = Self::zero();
        out.add_term(delta, f);
        out
    }

    /// `f y_0`.
    pub fn scalar(dim: usize, f: CoefficientFunction) -> Self {
        Self::monomial(vec![0; dim], f)
    }

    pub fn add_term(&mut self, delta: Vec<i64>, f: CoefficientFunction) {
        let merged = match self.terms.remove(&delta) {
            Some(prev) => prev + f,
            None => f,
        };
        self.terms.insert(delta, merged);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &CoefficientFunction)> {
        self.terms.iter()
    }

    pub fn coeff(&self, delta: &[i64]) -> Option<&CoefficientFunction> {
        self.terms.get(delta)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True if only `y_0` occurs.
    pub fn is_degree_zero(&self) -> bool {
        self.terms.keys().all(|d| d.iter().all(|&c| c == 0))
    }

    /// Coefficient values at `(tau, theta)`; exact zeros are dropped.
    pub fn eval(&self, tau: Complex64, theta: &[Complex64]) -> Result<BTreeMap<Vec<i64>, Complex64>> {
        let mut out = BTreeMap::new();
        for (d, f) in &self.terms {
            let v = f.eval(tau, theta)?;
            if v != Complex64::new(0.0, 0.0) {
                out.insert(d.clone(), v);
            }
        }
        Ok(out)
    }
}

/// Largest coefficient difference `|f - g| / (1 + |g|)` over the sample points,
/// skipping points where either side is singular.
pub fn max_element_difference(a: &ExtendedElement, b: &ExtendedElement, points: &[SamplePoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let (va, vb) = match (a.eval(p.tau, &p.theta), b.eval(p.tau, &p.theta)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) if e.is_singular() => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let zero = Complex64::new(0.0, 0.0);
        for d in va.keys().chain(vb.keys()) {
            let x = va.get(d).copied().unwrap_or(zero);
            let y = vb.get(d).copied().unwrap_or(zero);
            worst = worst.max((x - y).norm() / (1.0 + y.norm()));
        }
    }
    Ok(worst)
}
