//! Evaluable coefficient functions `f(tau, theta)` of the extended quantum
//! torus, stored as immutable expression DAGs.
//!
//! `theta` is a point of `V_e = Hom(Gamma_e, C)` given by its values on the
//! electric basis; `Theta { coords }` is the linear functional
//! `theta(gamma_e)` for `gamma_e` with those electric coordinates.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{log_f, log_lambda, quantum_dilog, DoubleGammaArgs, ModifiedGammaArgs, QDilogArgs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Const {
        re: f64,
        im: f64,
    },
    Tau,
    Theta {
        coords: Vec<i64>,
    },
    Add {
        lhs: CoefficientFunction,
        rhs: CoefficientFunction,
    },
    Sub {
        lhs: CoefficientFunction,
        rhs: CoefficientFunction,
    },
    Mul {
        lhs: CoefficientFunction,
        rhs: CoefficientFunction,
    },
    Div {
        lhs: CoefficientFunction,
        rhs: CoefficientFunction,
    },
    Neg {
        arg: CoefficientFunction,
    },
    Exp {
        arg: CoefficientFunction,
    },
    Log {
        arg: CoefficientFunction,
    },
    PowInt {
        base: CoefficientFunction,
        exp: i32,
    },
    Pow {
        base: CoefficientFunction,
        exponent: CoefficientFunction,
    },
    Lambda {
        w: CoefficientFunction,
        eta: CoefficientFunction,
        omega: CoefficientFunction,
    },
    F {
        w: CoefficientFunction,
        eta: CoefficientFunction,
        omega1: CoefficientFunction,
        omega2: CoefficientFunction,
    },
    QDilog {
        q: CoefficientFunction,
        x: CoefficientFunction,
    },
    /// `arg(tau, theta + tau * tau_coeffs + offset)`.
    Shift {
        arg: CoefficientFunction,
        tau_coeffs: Vec<i64>,
        offset: Vec<[f64; 2]>,
    },
}

/// Shared handle to an expression node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientFunction(Arc<Node>);

impl CoefficientFunction {
    fn new(node: Node) -> Self {
        CoefficientFunction(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(Node::Const { re: c.re, im: c.im })
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn tau() -> Self {
        Self::new(Node::Tau)
    }

    pub fn theta(coords: Vec<i64>) -> Self {
        Self::new(Node::Theta { coords })
    }

    pub fn exp(&self) -> Self {
        Self::new(Node::Exp { arg: self.clone() })
    }

    pub fn ln(&self) -> Self {
        Self::new(Node::Log { arg: self.clone() })
    }

    pub fn powi(&self, exp: i32) -> Self {
        match exp {
            0 => Self::one(),
            1 => self.clone(),
            _ => Self::new(Node::PowInt { base: self.clone(), exp }),
        }
    }

    /// `exp(exponent * log(self))`, principal log.
    pub fn powc(&self, exponent: &CoefficientFunction) -> Self {
        Self::new(Node::Pow { base: self.clone(), exponent: exponent.clone() })
    }

    pub fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    pub fn lambda(w: &Self, eta: &Self, omega: &Self) -> Self {
        Self::new(Node::Lambda { w: w.clone(), eta: eta.clone(), omega: omega.clone() })
    }

    pub fn f(w: &Self, eta: &Self, omega1: &Self, omega2: &Self) -> Self {
        Self::new(Node::F { w: w.clone(), eta: eta.clone(), omega1: omega1.clone(), omega2: omega2.clone() })
    }

    pub fn qdilog(q: &Self, x: &Self) -> Self {
        Self::new(Node::QDilog { q: q.clone(), x: x.clone() })
    }

    fn depends_on_theta(&self) -> bool {
        match self.node() {
            Node::Const { .. } | Node::Tau => false,
            Node::Theta { .. } => true,
            Node::Add { lhs, rhs } | Node::Sub { lhs, rhs } | Node::Mul { lhs, rhs } | Node::Div { lhs, rhs } => {
                lhs.depends_on_theta() || rhs.depends_on_theta()
            }
            Node::Neg { arg } | Node::Exp { arg } | Node::Log { arg } => arg.depends_on_theta(),
            Node::PowInt { base, .. } => base.depends_on_theta(),
            Node::Pow { base, exponent } => base.depends_on_theta() || exponent.depends_on_theta(),
            Node::Lambda { w, eta, omega } => {
                w.depends_on_theta() || eta.depends_on_theta() || omega.depends_on_theta()
            }
            Node::F { w, eta, omega1, omega2 } => {
                w.depends_on_theta() || eta.depends_on_theta() || omega1.depends_on_theta() || omega2.depends_on_theta()
            }
            Node::QDilog { q, x } => q.depends_on_theta() || x.depends_on_theta(),
            Node::Shift { arg, .. } => arg.depends_on_theta(),
        }
    }

    /// Substitute `theta -> theta + tau * tau_coeffs + offset`. Nested shifts
    /// are merged, and functions independent of `theta` are returned as is.
    pub fn shifted(&self, tau_coeffs: &[i64], offset: &[Complex64]) -> Self {
        let trivial = tau_coeffs.iter().all(|&c| c == 0) && offset.iter().all(|o| *o == Complex64::new(0.0, 0.0));
        if trivial || !self.depends_on_theta() {
            return self.clone();
        }
        let dim = tau_coeffs.len().max(offset.len());
        let mut coeffs = vec![0i64; dim];
        let mut off = vec![Complex64::new(0.0, 0.0); dim];
        for (i, c) in tau_coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, o) in offset.iter().enumerate() {
            off[i] += o;
        }
        let inner = match self.node() {
            Node::Shift { arg, tau_coeffs: c2, offset: o2 } => {
                for (i, c) in c2.iter().enumerate() {
                    if i < dim {
                        coeffs[i] += c;
                    }
                }
                for (i, [re, im]) in o2.iter().enumerate() {
                    if i < dim {
                        off[i] += Complex64::new(*re, *im);
                    }
                }
                arg.clone()
            }
            _ => self.clone(),
        };
        Self::new(Node::Shift { arg: inner, tau_coeffs: coeffs, offset: off.iter().map(|o| [o.re, o.im]).collect() })
    }

    pub fn eval(&self, tau: Complex64, theta: &[Complex64]) -> Result<Complex64> {
        let ev = |f: &CoefficientFunction| f.eval(tau, theta);
        match self.node() {
            Node::Const { re, im } => Ok(Complex64::new(*re, *im)),
            Node::Tau => Ok(tau),
            Node::Theta { coords } => {
                if coords.len() != theta.len() {
                    return Err(Error::DimensionMismatch { expected: coords.len(), found: theta.len() });
                }
                Ok(coords.iter().zip(theta).map(|(&c, t)| t * c as f64).sum())
            }
            Node::Add { lhs, rhs } => Ok(ev(lhs)? + ev(rhs)?),
            Node::Sub { lhs, rhs } => Ok(ev(lhs)? - ev(rhs)?),
            Node::Mul { lhs, rhs } => Ok(ev(lhs)? * ev(rhs)?),
            Node::Div { lhs, rhs } => {
                let d = ev(rhs)?;
                if d.norm() == 0.0 {
                    return Err(Error::Zero { location: tau });
                }
                Ok(ev(lhs)? / d)
            }
            Node::Neg { arg } => Ok(-ev(arg)?),
            Node::Exp { arg } => Ok(ev(arg)?.exp()),
            Node::Log { arg } => {
                let a = ev(arg)?;
                if a.norm() == 0.0 {
                    return Err(Error::Zero { location: tau });
                }
                Ok(a.ln())
            }
            Node::PowInt { base, exp } => {
                let b = ev(base)?;
                if *exp < 0 && b.norm() == 0.0 {
                    return Err(Error::Zero { location: tau });
                }
                Ok(b.powi(*exp))
            }
            Node::Pow { base, exponent } => {
                let b = ev(base)?;
                if b.norm() == 0.0 {
                    return Err(Error::Zero { location: tau });
                }
                Ok((ev(exponent)? * b.ln()).exp())
            }
            Node::Lambda { w, eta, omega } => {
                let args = ModifiedGammaArgs::new(ev(w)?, ev(eta)?, ev(omega)?);
                Ok(log_lambda(&args)?.exp())
            }
            Node::F { w, eta, omega1, omega2 } => {
                let args = DoubleGammaArgs { w: ev(w)?, eta: ev(eta)?, omega1: ev(omega1)?, omega2: ev(omega2)? };
                Ok(log_f(&args)?.exp())
            }
            Node::QDilog { q, x } => quantum_dilog(&QDilogArgs { q: ev(q)?, x: ev(x)? }),
            Node::Shift { arg, tau_coeffs, offset } => {
                let mut shifted = theta.to_vec();
                for (i, t) in shifted.iter_mut().enumerate() {
                    if let Some(c) = tau_coeffs.get(i) {
                        *t += tau * *c as f64;
                    }
                    if let Some([re, im]) = offset.get(i) {
                        *t += Complex64::new(*re, *im);
                    }
                }
                arg.eval(tau, &shifted)
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for CoefficientFunction {
            type Output = CoefficientFunction;
            fn $method(self, rhs: CoefficientFunction) -> CoefficientFunction {
                CoefficientFunction::new(Node::$variant { lhs: self, rhs })
            }
        }
        impl $trait for &CoefficientFunction {
            type Output = CoefficientFunction;
            fn $method(self, rhs: &CoefficientFunction) -> CoefficientFunction {
                CoefficientFunction::new(Node::$variant { lhs: self.clone(), rhs: rhs.clone() })
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for CoefficientFunction {
    type Output = CoefficientFunction;
    fn neg(self) -> CoefficientFunction {
        CoefficientFunction::new(Node::Neg { arg: self })
    }
}

impl From<Complex64> for CoefficientFunction {
    fn from(c: Complex64) -> Self {
        CoefficientFunction::constant(c)
    }
}

/// A seeded sample point `(tau, theta)` with `Im(tau) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub tau: Complex64,
    pub theta: Vec<Complex64>,
}

/// Deterministic sample points with `Re(tau) in [-0.5, 0.5]`,
/// `Im(tau) in [0.3, 1.5]` and `|Re theta_i|, |Im theta_i| <= 0.5`.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| SamplePoint {
            tau: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..1.5)),
            theta: (0..dim).map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))).collect(),
        })
        .collect()
}

/// Largest relative difference `|f - g| / (1 + |g|)` over the points where
/// both sides evaluate; points where either side is singular are skipped.
pub fn max_difference(f: &CoefficientFunction, g: &CoefficientFunction, points: &[SamplePoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let a = f.eval(p.tau, &p.theta);
        let b = g.eval(p.tau, &p.theta);
        match (a, b) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).norm() / (1.0 + b.norm())),
            (Err(e), _) | (_, Err(e)) if e.is_singular() => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(worst)
}

/// Numerical equality on seeded sample points.
pub fn approx_eq(f: &CoefficientFunction, g: &CoefficientFunction, points: &[SamplePoint], tol: f64) -> Result<bool> {
    Ok(max_difference(f, g, points)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_composition() {
        let f = (CoefficientFunction::theta(vec![1, 2]) * CoefficientFunction::tau()).exp();
        let a = f.shifted(&[1, 0], &[c(0.1, 0.0), c(0.0, 0.2)]);
        let ab = a.shifted(&[0, -1], &[c(0.0, 0.3), c(0.0, 0.0)]);
        let direct = f.shifted(&[1, -1], &[c(0.1, 0.3), c(0.0, 0.2)]);
        assert!(matches!(ab.node(), Node::Shift { .. }));
        let pts = sample_points(2, 20, 1);
        assert!(max_difference(&ab, &direct, &pts).unwrap() < 1e-15);
        assert_eq!(ab, direct);
    }

    #[test]
    fn theta_independent_shift_is_noop() {
        let f = CoefficientFunction::tau().exp();
        assert_eq!(f.shifted(&[3], &[]), f);
    }

    #[test]
    fn json_round_trip() {
        let f = CoefficientFunction::lambda(
            &(CoefficientFunction::real(0.3) / CoefficientFunction::tau()),
            &CoefficientFunction::theta(vec![1]),
            &CoefficientFunction::one(),
        )
        .shifted(&[1], &[c(1.0 / 3.0, 0.1)]);
        let text = serde_json::to_string(&f).unwrap();
        let back: CoefficientFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let (tau, th) = (c(0.2, 0.9), [c(0.1, -0.2)]);
        assert_eq!(back.eval(tau, &th).unwrap(), f.eval(tau, &th).unwrap());
    }

    #[test]
    fn division_by_zero_is_signalled() {
        let f = CoefficientFunction::one() / (CoefficientFunction::tau() - CoefficientFunction::tau());
        assert!(matches!(f.eval(c(0.0, 1.0), &[]), Err(Error::Zero { .. })));
    }
}
