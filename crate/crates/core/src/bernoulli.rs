//! Multiple Bernoulli polynomials `B_{N,k}(x | a)`.
//!
//! They are the Taylor coefficients of
//!
//! ```text
//!   t^N e^{xt} / prod_i (e^{a_i t} - 1) = sum_k B_{N,k}(x | a) t^k / k!
//! ```
//!
//! Each factor `t / (e^{a t} - 1)` expands as `sum_j B_j a^{j-1} t^j / j!` with
//! the classical Bernoulli numbers `B_j` (`B_1 = -1/2`). The values at `x = 0`
//! are obtained by convolving these series; the `x` dependence is then a
//! polynomial evaluated by Horner's rule from the highest degree.
//!
//! Accuracy degrades for very large `|x|` (beyond about `1e6`) because of
//! cancellation between monomials.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Highest Bernoulli number index kept in the cache.
pub const MAX_BERNOULLI_INDEX: usize = 160;

fn bernoulli_rationals() -> &'static [BigRational] {
    static CACHE: OnceLock<Vec<BigRational>> = OnceLock::new();
    CACHE.get_or_init(|| {
        // B_m = -1/(m+1) sum_{k<m} C(m+1, k) B_k
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_BERNOULLI_INDEX + 1);
        b.push(BigRational::one());
        for m in 1..=MAX_BERNOULLI_INDEX {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                // C(m+1, k+1) from C(m+1, k)
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

fn bernoulli_floats() -> &'static [f64] {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    CACHE.get_or_init(|| {
        bernoulli_rationals()
            .iter()
            .map(|r| {
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                if n.is_finite() && d.is_finite() {
                    n / d
                } else {
                    // numerator and denominator overflow separately for large
                    // indices; fall back to scaled division
                    big_ratio_to_f64(r)
                }
            })
            .collect()
    })
}

fn big_ratio_to_f64(r: &BigRational) -> f64 {
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

/// Classical Bernoulli number `B_n` with the convention `B_1 = -1/2`.
///
/// Panics if `n > MAX_BERNOULLI_INDEX`.
pub fn bernoulli_number(n: usize) -> f64 {
    bernoulli_floats()[n]
}

/// Exact rational Bernoulli number.
pub fn bernoulli_number_exact(n: usize) -> BigRational {
    bernoulli_rationals()[n].clone()
}

/// Arguments of a multiple Bernoulli polynomial evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBernoulliQuery {
    pub k: usize,
    pub x: Complex64,
    pub a: Vec<Complex64>,
}

impl MultiBernoulliQuery {
    pub fn new(k: usize, x: Complex64, a: Vec<Complex64>) -> Self {
        Self { k, x, a }
    }

    /// Number of parameters `N`.
    pub fn n(&self) -> usize {
        self.a.len()
    }
}

/// Precomputed values `B_{N,m}(0 | a)` for `m <= max_k`, for repeated
/// evaluation with the same parameter vector.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    a: Vec<Complex64>,
    at_zero: Vec<Complex64>,
}

impl BernoulliTable {
    pub fn new(a: &[Complex64], max_k: usize) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::invalid("at least one parameter is required"));
        }
        if let Some(i) = a.iter().position(|ai| ai.norm() == 0.0) {
            return Err(Error::invalid(format!("parameter a_{} is zero", i + 1)));
        }
        if max_k > MAX_BERNOULLI_INDEX {
            return Err(Error::Unsupported(format!("polynomial index {max_k} exceeds {MAX_BERNOULLI_INDEX}")));
        }
        let b = bernoulli_floats();
        let mut fact = vec![1.0f64; max_k + 1];
        for j in 1..=max_k {
            fact[j] = fact[j - 1] * j as f64;
        }
        // Series of prod_i t/(e^{a_i t}-1), truncated at t^max_k.
        let mut series = vec![Complex64::new(0.0, 0.0); max_k + 1];
        series[0] = Complex64::new(1.0, 0.0);
        for &ai in a {
            let mut factor = Vec::with_capacity(max_k + 1);
            let mut pow = ai.inv();
            for (j, fj) in fact.iter().enumerate() {
                factor.push(pow * (b[j] / fj));
                pow *= ai;
            }
            let mut next = vec![Complex64::new(0.0, 0.0); max_k + 1];
            for (i, si) in series.iter().enumerate() {
                for (j, fj) in factor.iter().enumerate().take(max_k + 1 - i) {
                    next[i + j] += si * fj;
                }
            }
            series = next;
        }
        let at_zero = series.iter().zip(fact.iter()).map(|(s, f)| s * f).collect();
        Ok(Self { a: a.to_vec(), at_zero })
    }

    pub fn params(&self) -> &[Complex64] {
        &self.a
    }

    pub fn max_k(&self) -> usize {
        self.at_zero.len() - 1
    }

    /// `B_{N,k}(0 | a)`.
    pub fn at_zero(&self, k: usize) -> Complex64 {
        self.at_zero[k]
    }

    /// `B_{N,k}(x | a) = sum_m C(k,m) B_{N,m}(0|a) x^{k-m}`, by Horner's rule.
    pub fn eval(&self, k: usize, x: Complex64) -> Complex64 {
        assert!(k <= self.max_k(), "index {k} beyond table size");
        // coefficient of x^d is C(k, d) B_{N,k-d}(0)
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0f64; // C(k, d) starting at d = k
        for d in (0..=k).rev() {
            acc = acc * x + self.at_zero[k - d] * binom;
            // C(k, d-1) = C(k, d) * d / (k - d + 1)
            binom = binom * d as f64 / (k - d + 1) as f64;
        }
        acc
    }
}

/// `B_{N,k}(x | a)` for `N = a.len()`.
pub fn multi_bernoulli(q: &MultiBernoulliQuery) -> Result<Complex64> {
    let table = BernoulliTable::new(&q.a, q.k)?;
    Ok(table.eval(q.k, q.x))
}

/// Classical Bernoulli polynomial `B_k(x) = B_{1,k}(x | 1)`.
pub fn classical_bernoulli(k: usize, x: Complex64) -> Complex64 {
    BernoulliTable::new(&[Complex64::new(1.0, 0.0)], k).expect("unit parameter is valid").eval(k, x)
}

/// `B_{2,2}(x | w1, w2)` in closed form; used on hot paths.
pub fn b22(x: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
    let p = w1 * w2;
    x * x / p - (w1.inv() + w2.inv()) * x + (w2 / w1 + w1 / w2) / 6.0 + 0.5
}

/// `B_{1,1}(x | w) = x/w - 1/2`.
pub fn b11(x: Complex64, w: Complex64) -> Complex64 {
    x / w - 0.5
}
