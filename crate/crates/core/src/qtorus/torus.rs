//! The quantum torus algebra in the `y`-generators:
//! `y_a * y_b = q^{<a,b>/2} y_{a+b}` over Laurent polynomials in `q^{1/2}`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::bps::Charge;
use crate::error::{Error, Result};

/// `sum_k c_k q^{k/2}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentQ(BTreeMap<i32, Complex64>);

impl LaurentQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    /// `c q^{k/2}`.
    pub fn monomial(k: i32, c: Complex64) -> Self {
        let mut m = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            m.insert(k, c);
        }
        LaurentQ(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        self.0.get(&k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.0.iter().map(|(&k, &c)| (k, c))
    }

    fn add_term(&mut self, k: i32, c: Complex64) {
        let e = self.0.entry(k).or_default();
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.0.remove(&k);
        }
    }

    /// Multiply by `q^{k/2}`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentQ(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    /// Value at a given `q^{1/2}`.
    pub fn eval(&self, q_half: Complex64) -> Complex64 {
        self.0.iter().map(|(&k, &c)| c * q_half.powi(k)).sum()
    }
}

impl Add for &LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

/// Finite sum `sum_gamma c_gamma(q^{1/2}) y_gamma`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuantumTorusElement(BTreeMap<Charge, LaurentQ>);

impl QuantumTorusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c q^{k/2} y_gamma`.
    pub fn monomial(gamma: Charge, k: i32, c: Complex64) -> Self {
        let mut out = Self::zero();
        out.add_term(gamma, &LaurentQ::monomial(k, c));
        out
    }

    /// `y_gamma`.
    pub fn generator(gamma: Charge) -> Self {
        Self::monomial(gamma, 0, Complex64::new(1.0, 0.0))
    }

    pub fn add_term(&mut self, gamma: Charge, c: &LaurentQ) {
        let sum = match self.0.get(&gamma) {
            Some(prev) => prev + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.0.remove(&gamma);
        } else {
            self.0.insert(gamma, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Charge, &LaurentQ)> {
        self.0.iter()
    }

    pub fn coeff(&self, gamma: &Charge) -> LaurentQ {
        self.0.get(gamma).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl Add for &QuantumTorusElement {
    type Output = QuantumTorusElement;
    fn add(self, rhs: &QuantumTorusElement) -> QuantumTorusElement {
        let mut out = self.clone();
        for (g, c) in rhs.terms() {
            out.add_term(g.clone(), c);
        }
        out
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

/// Product in the quantum torus with skew form `form`.
pub fn qt_mul(a: &QuantumTorusElement, b: &QuantumTorusElement, form: &[Vec<i64>]) -> Result<QuantumTorusElement> {
    let n = form.len();
    for g in a.0.keys().chain(b.0.keys()) {
        if g.rank() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.rank() });
        }
    }
    let mut out = QuantumTorusElement::zero();
    for (g1, c1) in a.terms() {
        for (g2, c2) in b.terms() {
            let twist = pair(form, g1, g2);
            let k = i32::try_from(twist).map_err(|_| Error::invalid("pairing exceeds the exponent range"))?;
            out.add_term(g1.add(g2), &(c1 * c2).shift(k));
        }
    }
    Ok(out)
}
