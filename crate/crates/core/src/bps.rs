//! Refined BPS structures: a lattice with an integral skew form, a central
//! charge, and invariants `Omega(gamma)` valued in Laurent polynomials in
//! `L^{1/2}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice vector in coordinates of the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Charge(pub Vec<i64>);

impl Charge {
    pub fn zero(rank: usize) -> Self {
        Charge(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Charge(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Charge {
        Charge(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Charge) -> Charge {
        Charge(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Charge {
        Charge(self.0.iter().map(|c| c * k).collect())
    }

    /// Greatest common divisor of the coordinates.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| gcd(g, c.abs()))
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `sum_n c_n L^{n/2}` with rational coefficients; exponent `n` is stored as
/// the integer key.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly(BTreeMap<i32, Rational64>);

impl LaurentPoly {
    pub fn constant(c: i64) -> Self {
        Self::from_terms([(0, Rational64::from_integer(c))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Rational64)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, c) in terms {
            let e = map.entry(n).or_insert_with(Rational64::zero);
            *e += c;
        }
        map.retain(|_, c| !c.is_zero());
        LaurentPoly(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient `Omega_n`.
    pub fn coeff(&self, n: i32) -> Rational64 {
        self.0.get(&n).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Rational64)> + '_ {
        self.0.iter().map(|(&n, &c)| (n, c))
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().all(|(&n, c)| self.coeff(-n) == *c)
    }

    pub fn is_integral(&self) -> bool {
        self.0.values().all(|c| c.is_integer())
    }
}

/// Refined BPS structure with finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedBPSStructure {
    rank: usize,
    skew_form: Vec<Vec<i64>>,
    central_charge: Vec<Complex64>,
    omega: BTreeMap<Charge, LaurentPoly>,
    splitting: Option<EMSplitting>,
}

/// The four conditions a structure may satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub finite: bool,
    pub uncoupled: bool,
    pub palindromic: bool,
    pub integral: bool,
}

impl Classification {
    pub fn all(&self) -> bool {
        self.finite && self.uncoupled && self.palindromic && self.integral
    }
}

/// An active ray `R_{>0} Z(gamma)` with the classes whose central charge lies
/// on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub phase: Complex64,
    pub classes: Vec<Charge>,
}

impl Ray {
    /// A ray without classes, used to index half-planes.
    pub fn direction(phase: Complex64) -> Result<Self> {
        if phase.norm() == 0.0 || !phase.norm().is_finite() {
            return Err(Error::invalid("ray direction must be non-zero"));
        }
        Ok(Ray { phase: phase / phase.norm(), classes: Vec::new() })
    }
}

/// Tolerance for grouping central charges into rays.
pub const RAY_TOL: f64 = 1e-12;

impl RefinedBPSStructure {
    pub fn new(
        skew_form: Vec<Vec<i64>>,
        central_charge: Vec<Complex64>,
        omega: BTreeMap<Charge, LaurentPoly>,
    ) -> Result<Self> {
        let rank = central_charge.len();
        if rank == 0 {
            return Err(Error::invalid("rank must be positive"));
        }
        if skew_form.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: skew_form.len() });
        }
        for row in &skew_form {
            if row.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: row.len() });
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if skew_form[i][j] != -skew_form[j][i] {
                    return Err(Error::invalid(format!("skew form is not antisymmetric at ({i},{j})")));
                }
            }
        }
        let mut cleaned = BTreeMap::new();
        for (g, p) in omega {
            if g.rank() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: g.rank() });
            }
            if p.is_zero() {
                continue;
            }
            if g.is_zero() {
                return Err(Error::Inconsistent("Omega(0) must vanish".into()));
            }
            cleaned.insert(g, p);
        }
        for (g, p) in &cleaned {
            match cleaned.get(&g.neg()) {
                Some(q) if q == p => {}
                _ => return Err(Error::Inconsistent(format!("Omega({}) differs from Omega({})", g.neg(), g))),
            }
        }
        Ok(Self { rank, skew_form, central_charge, omega: cleaned, splitting: None })
    }

    pub fn with_splitting(mut self, s: EMSplitting) -> Result<Self> {
        let s = em_splitting(&self, Some(s))?;
        self.splitting = Some(s);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn skew_form(&self) -> &[Vec<i64>] {
        &self.skew_form
    }

    pub fn central_charges(&self) -> &[Complex64] {
        &self.central_charge
    }

    pub fn omega_map(&self) -> &BTreeMap<Charge, LaurentPoly> {
        &self.omega
    }

    pub fn splitting(&self) -> Option<&EMSplitting> {
        self.splitting.as_ref()
    }

    /// `Omega(gamma)`, zero outside the stored support.
    pub fn omega(&self, g: &Charge) -> LaurentPoly {
        self.omega.get(g).cloned().unwrap_or_default()
    }

    pub fn active_classes(&self) -> impl Iterator<Item = (&Charge, &LaurentPoly)> {
        self.omega.iter()
    }

    /// `<a, b> = a^T M b`.
    pub fn pairing(&self, a: &Charge, b: &Charge) -> i64 {
        let mut acc = 0;
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                acc += a.0[i] * self.skew_form[i][j] * b.0[j];
            }
        }
        acc
    }

    pub fn z(&self, g: &Charge) -> Complex64 {
        g.0.iter().zip(&self.central_charge).map(|(&c, z)| z * c as f64).sum()
    }

    /// Copy with the central charge multiplied by `lambda`.
    pub fn rescaled(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.central_charge {
            *z *= lambda;
        }
        out
    }

    /// Copy with the central charge negated.
    pub fn negated_charge(&self) -> Self {
        self.rescaled(Complex64::new(-1.0, 0.0))
    }

    fn check_charge(&self, g: &Charge) -> Result<()> {
        if g.rank() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: g.rank() });
        }
        Ok(())
    }
}

/// The doubled A1 structure: basis `(alpha, alpha_dual)` with
/// `<alpha_dual, alpha> = 1`, `Z(alpha) = z`, `Z(alpha_dual) = 0` and
/// `Omega(+-alpha) = 1`.
pub fn doubled_a1(z: Complex64) -> Result<RefinedBPSStructure> {
    if z.norm() == 0.0 || !z.norm().is_finite() {
        return Err(Error::invalid("central charge z must be non-zero"));
    }
    let mut omega = BTreeMap::new();
    omega.insert(Charge(vec![1, 0]), LaurentPoly::constant(1));
    omega.insert(Charge(vec![-1, 0]), LaurentPoly::constant(1));
    let b = RefinedBPSStructure::new(vec![vec![0, -1], vec![1, 0]], vec![z, Complex64::new(0.0, 0.0)], omega)?;
    let s = EMSplitting::new(vec![Charge(vec![1, 0])], vec![Charge(vec![0, 1])]);
    b.with_splitting(s)
}

/// Orthogonal direct sum of structures.
pub fn direct_sum(parts: &[RefinedBPSStructure]) -> Result<RefinedBPSStructure> {
    let rank: usize = parts.iter().map(|p| p.rank).sum();
    let mut form = vec![vec![0; rank]; rank];
    let mut z = Vec::with_capacity(rank);
    let mut omega = BTreeMap::new();
    let mut offset = 0;
    for p in parts {
        for i in 0..p.rank {
            for j in 0..p.rank {
                form[offset + i][offset + j] = p.skew_form[i][j];
            }
        }
        z.extend_from_slice(&p.central_charge);
        for (g, poly) in &p.omega {
            let mut v = vec![0; rank];
            v[offset..offset + p.rank].copy_from_slice(&g.0);
            omega.insert(Charge(v), poly.clone());
        }
        offset += p.rank;
    }
    RefinedBPSStructure::new(form, z, omega)
}

pub fn classify(b: &RefinedBPSStructure) -> Classification {
    let classes: Vec<&Charge> = b.omega.keys().collect();
    let uncoupled = classes.iter().all(|g1| classes.iter().all(|g2| b.pairing(g1, g2) == 0));
    Classification {
        finite: true,
        uncoupled,
        palindromic: b.omega.values().all(LaurentPoly::is_palindromic),
        integral: b.omega.values().all(LaurentPoly::is_integral),
    }
}

/// Active rays ordered by phase angle in `(-pi, pi]`, classes sorted.
pub fn active_rays(b: &RefinedBPSStructure) -> Result<Vec<Ray>> {
    let mut rays: Vec<Ray> = Vec::new();
    for g in b.omega.keys() {
        let z = b.z(g);
        if z.norm() == 0.0 {
            return Err(Error::domain(format!("active class {g} has Z = 0")));
        }
        let phase = z / z.norm();
        match rays.iter_mut().find(|r| (r.phase - phase).norm() <= RAY_TOL) {
            Some(r) => r.classes.push(g.clone()),
            None => rays.push(Ray { phase, classes: vec![g.clone()] }),
        }
    }
    for r in &mut rays {
        r.classes.sort();
    }
    let angle = |p: Complex64| {
        let a = p.arg();
        if a == -PI {
            PI
        } else {
            a
        }
    };
    rays.sort_by(|a, b| angle(a.phase).total_cmp(&angle(b.phase)));
    Ok(rays)
}

/// Sign map `sigma(gamma) = prod_i sigma(e_i)^{c_i} (-1)^{sum_{i<j} c_i c_j <e_i, e_j>}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRefinement {
    basis_signs: Vec<i8>,
    skew_form: Vec<Vec<i64>>,
}

impl QuadraticRefinement {
    pub fn from_basis_signs(b: &RefinedBPSStructure, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != b.rank {
            return Err(Error::DimensionMismatch { expected: b.rank, found: signs.len() });
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::invalid("basis signs must be +1 or -1"));
        }
        Ok(Self { basis_signs: signs, skew_form: b.skew_form.clone() })
    }

    pub fn basis_signs(&self) -> &[i8] {
        &self.basis_signs
    }

    fn parity(&self, g: &Charge) -> i64 {
        let c = &g.0;
        let mut p = 0i64;
        for (i, s) in self.basis_signs.iter().enumerate() {
            if *s < 0 {
                p += c[i];
            }
        }
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                p += c[i] * c[j] * self.skew_form[i][j];
            }
        }
        p.rem_euclid(2)
    }

    pub fn sign(&self, g: &Charge) -> i8 {
        if self.parity(g) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Solve `sigma(gamma) = (-1)^{n+1}` whenever `Omega_n(gamma) != 0` over
/// GF(2); free basis signs are set to `+1`.
pub fn canonical_refinement(b: &RefinedBPSStructure) -> Result<QuadraticRefinement> {
    let n = b.rank;
    // rows: coefficient bits for s_i and right-hand side
    let mut rows: Vec<(Vec<u8>, u8, Charge, i32)> = Vec::new();
    for (g, poly) in &b.omega {
        let mut q = 0i64;
        for i in 0..n {
            for j in (i + 1)..n {
                q += g.0[i] * g.0[j] * b.skew_form[i][j];
            }
        }
        for (k, _) in poly.terms() {
            let bits: Vec<u8> = g.0.iter().map(|c| c.rem_euclid(2) as u8).collect();
            let rhs = ((k as i64 + 1 - q).rem_euclid(2)) as u8;
            rows.push((bits, rhs, g.clone(), k));
        }
    }
    let mut pivots: Vec<(usize, Vec<u8>, u8)> = Vec::new();
    let mut violations = Vec::new();
    for (mut bits, mut rhs, g, k) in rows {
        for (col, pb, pr) in &pivots {
            if bits[*col] == 1 {
                for i in 0..n {
                    bits[i] ^= pb[i];
                }
                rhs ^= pr;
            }
        }
        match bits.iter().position(|&x| x == 1) {
            Some(col) => {
                for (_, pb, pr) in pivots.iter_mut() {
                    if pb[col] == 1 {
                        for i in 0..n {
                            pb[i] ^= bits[i];
                        }
                        *pr ^= rhs;
                    }
                }
                pivots.push((col, bits, rhs));
            }
            None if rhs == 1 => violations.push(format!("{g} (n = {k})")),
            None => {}
        }
    }
    if !violations.is_empty() {
        return Err(Error::Inconsistent(format!(
            "no quadratic refinement with the required signs; conflicting classes: {}",
            violations.join(", ")
        )));
    }
    let mut s = vec![0u8; n];
    for (col, _, rhs) in &pivots {
        s[*col] = *rhs;
    }
    let signs = s.iter().map(|&v| if v == 1 { -1 } else { 1 }).collect();
    QuadraticRefinement::from_basis_signs(b, signs)
}

/// Decomposition `Gamma = Gamma_e + Gamma_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EMSplitting {
    pub electric_basis: Vec<Charge>,
    pub magnetic_basis: Vec<Charge>,
    #[serde(skip)]
    inverse: Vec<Vec<i64>>,
}

impl EMSplitting {
    /// Unverified splitting; `em_splitting` checks it against a structure.
    pub fn new(electric_basis: Vec<Charge>, magnetic_basis: Vec<Charge>) -> Self {
        Self { electric_basis, magnetic_basis, inverse: Vec::new() }
    }

    pub fn theta_space_dim(&self) -> usize {
        self.electric_basis.len()
    }

    pub fn magnetic_dim(&self) -> usize {
        self.magnetic_basis.len()
    }

    fn rank(&self) -> usize {
        self.electric_basis.len() + self.magnetic_basis.len()
    }

    fn ensure_inverse(&mut self) -> Result<()> {
        let n = self.rank();
        let cols: Vec<&Charge> = self.electric_basis.iter().chain(&self.magnetic_basis).collect();
        if cols.iter().any(|c| c.rank() != n) {
            return Err(Error::invalid(format!("splitting has {n} basis vectors but charges of another rank")));
        }
        // columns are basis vectors; invert over Q and demand an integer inverse
        let mut m: Vec<Vec<Rational64>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational64> = cols.iter().map(|c| Rational64::from_integer(c.0[i])).collect();
                row.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or_else(|| Error::invalid("splitting vectors are linearly dependent"))?;
            m.swap(col, piv);
            let p = m[col][col];
            for v in m[col].iter_mut() {
                *v /= p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let mut inv = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = m[i][n + j];
                if !v.is_integer() {
                    return Err(Error::invalid("splitting vectors span a proper sublattice, not all of Z^n"));
                }
                inv[i][j] = v.to_integer();
            }
        }
        self.inverse = inv;
        Ok(())
    }

    /// Coordinates of `g` in the electric and magnetic bases.
    pub fn coordinates(&self, g: &Charge) -> Result<(Vec<i64>, Vec<i64>)> {
        let n = self.rank();
        if self.inverse.len() != n {
            return Err(Error::invalid("splitting has not been verified"));
        }
        if g.rank() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.rank() });
        }
        let coords: Vec<i64> = self.inverse.iter().map(|row| row.iter().zip(&g.0).map(|(a, b)| a * b).sum()).collect();
        let k = self.electric_basis.len();
        Ok((coords[..k].to_vec(), coords[k..].to_vec()))
    }

    /// `(gamma_e, gamma_m)` with `g = gamma_e + gamma_m`.
    pub fn decompose(&self, g: &Charge) -> Result<(Charge, Charge)> {
        let (e, m) = self.coordinates(g)?;
        Ok((self.electric_from(&e), self.magnetic_from(&m)))
    }

    pub fn electric_from(&self, coords: &[i64]) -> Charge {
        combine(&self.electric_basis, coords, self.rank())
    }

    pub fn magnetic_from(&self, coords: &[i64]) -> Charge {
        combine(&self.magnetic_basis, coords, self.rank())
    }
}

fn combine(basis: &[Charge], coords: &[i64], rank: usize) -> Charge {
    let mut v = Charge::zero(rank);
    for (b, &c) in basis.iter().zip(coords) {
        v = v.add(&b.scale(c));
    }
    v
}

fn verify_splitting(b: &RefinedBPSStructure, mut s: EMSplitting) -> Result<EMSplitting> {
    if s.rank() != b.rank {
        return Err(Error::DimensionMismatch { expected: b.rank, found: s.rank() });
    }
    s.ensure_inverse()?;
    let mut problems = Vec::new();
    for (name, basis) in [("electric", &s.electric_basis), ("magnetic", &s.magnetic_basis)] {
        for (i, x) in basis.iter().enumerate() {
            for y in &basis[i + 1..] {
                let p = b.pairing(x, y);
                if p != 0 {
                    problems.push(format!("<{x},{y}> = {p} on the {name} sublattice"));
                }
            }
        }
    }
    for g in b.omega.keys() {
        let (_, m) = s.coordinates(g)?;
        if m.iter().any(|&c| c != 0) {
            problems.push(format!("active class {g} is not electric"));
        }
    }
    if problems.is_empty() {
        Ok(s)
    } else {
        Err(Error::Inconsistent(format!("invalid electric/magnetic splitting: {}", problems.join("; "))))
    }
}

/// Verify a proposed splitting, or construct one when the active classes are
/// paired with standard basis vectors as in a doubled structure.
pub fn em_splitting(b: &RefinedBPSStructure, proposed: Option<EMSplitting>) -> Result<EMSplitting> {
    if !classify(b).uncoupled {
        return Err(Error::domain("structure is not uncoupled"));
    }
    if let Some(s) = proposed {
        return verify_splitting(b, s);
    }
    if let Some(s) = &b.splitting {
        return Ok(s.clone());
    }
    let electric = primitive_electric_basis(b);
    let k = electric.len();
    let n = b.rank;
    let candidates: Vec<Charge> = (0..n).map(|i| Charge::basis(n, i)).collect();
    let mut chosen = Vec::new();
    if search_magnetic(b, &electric, &candidates, 0, n - k, &mut chosen) {
        let s = EMSplitting::new(electric, chosen);
        return verify_splitting(b, s);
    }
    Err(Error::Unsupported("cannot construct an electric/magnetic splitting automatically; supply one".into()))
}

fn primitive_electric_basis(b: &RefinedBPSStructure) -> Vec<Charge> {
    let mut basis: Vec<Charge> = Vec::new();
    let mut classes: Vec<&Charge> = b.omega.keys().filter(|g| g.content() == 1).collect();
    // prefer positive representatives for a stable result
    classes.sort_by_key(|g| std::cmp::Reverse((*g).clone()));
    for g in classes {
        let mut trial: Vec<Charge> = basis.clone();
        trial.push(g.clone());
        if rank_of(&trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

fn rank_of(vs: &[Charge]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let cols = vs[0].rank();
    let mut m: Vec<Vec<Rational64>> =
        vs.iter().map(|v| v.0.iter().map(|&c| Rational64::from_integer(c)).collect()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col] / m[rank][col];
                let pr = m[rank].clone();
                for (v, pv) in m[r].iter_mut().zip(pr) {
                    *v -= f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn search_magnetic(
    b: &RefinedBPSStructure,
    electric: &[Charge],
    candidates: &[Charge],
    start: usize,
    need: usize,
    chosen: &mut Vec<Charge>,
) -> bool {
    if need == 0 {
        let s = EMSplitting::new(electric.to_vec(), chosen.clone());
        return verify_splitting(b, s).is_ok();
    }
    for i in start..candidates.len() {
        let c = &candidates[i];
        if chosen.iter().any(|m| b.pairing(m, c) != 0) {
            continue;
        }
        chosen.push(c.clone());
        if search_magnetic(b, electric, candidates, i + 1, need - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(pub i64);

impl HalfInteger {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `epsilon = sign <beta, gamma>` and the `|<beta, gamma>|` half-integers
/// `epsilon (2j - 1)/2`, `1 <= j <= |<beta, gamma>|`, lying between `0` and
/// `<beta, gamma>`.
pub fn kappa_set(b: &RefinedBPSStructure, beta: &Charge, gamma: &Charge) -> Result<(i64, Vec<HalfInteger>)> {
    b.check_charge(beta)?;
    b.check_charge(gamma)?;
    Ok(kappa_from_pairing(b.pairing(beta, gamma)))
}

pub fn kappa_from_pairing(m: i64) -> (i64, Vec<HalfInteger>) {
    let eps = m.signum();
    let set = (1..=m.abs()).map(|j| HalfInteger(eps * (2 * j - 1))).collect();
    (eps, set)
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    n: i32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct OmegaEntry {
    gamma: Vec<i64>,
    poly: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize)]
struct SplittingDoc {
    electric: Vec<Vec<i64>>,
    magnetic: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct StructureDoc {
    rank: usize,
    skew_form: Vec<Vec<i64>>,
    #[serde(rename = "Z")]
    z: Vec<[f64; 2]>,
    omega: Vec<OmegaEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    splitting: Option<SplittingDoc>,
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::invalid(format!("malformed rational '{s}'")));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q == 0 {
                return Err(Error::invalid(format!("zero denominator in '{s}'")));
            }
            Ok(Rational64::new(parse(p)?, q))
        }
        None => Ok(Rational64::from_integer(parse(s)?)),
    }
}

impl RefinedBPSStructure {
    pub fn to_json(&self) -> String {
        let doc = StructureDoc {
            rank: self.rank,
            skew_form: self.skew_form.clone(),
            z: self.central_charge.iter().map(|z| [z.re, z.im]).collect(),
            omega: self
                .omega
                .iter()
                .map(|(g, p)| OmegaEntry {
                    gamma: g.0.clone(),
                    poly: p
                        .terms()
                        .map(|(n, c)| PolyTerm {
                            n,
                            c: if c.is_integer() {
                                c.to_integer().to_string()
                            } else {
                                format!("{}/{}", c.numer(), c.denom())
                            },
                        })
                        .collect(),
                })
                .collect(),
            splitting: self.splitting.as_ref().map(|s| SplittingDoc {
                electric: s.electric_basis.iter().map(|c| c.0.clone()).collect(),
                magnetic: s.magnetic_basis.iter().map(|c| c.0.clone()).collect(),
            }),
        };
        serde_json::to_string_pretty(&doc).expect("structure document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StructureDoc =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed BPS structure document: {e}")))?;
        if doc.z.len() != doc.rank {
            return Err(Error::DimensionMismatch { expected: doc.rank, found: doc.z.len() });
        }
        let mut omega = BTreeMap::new();
        for entry in doc.omega {
            let mut terms = Vec::new();
            for t in entry.poly {
                terms.push((t.n, parse_rational(&t.c)?));
            }
            omega.insert(Charge(entry.gamma), LaurentPoly::from_terms(terms));
        }
        let z = doc.z.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let b = Self::new(doc.skew_form, z, omega)?;
        match doc.splitting {
            Some(s) => b.with_splitting(EMSplitting::new(
                s.electric.into_iter().map(Charge).collect(),
                s.magnetic.into_iter().map(Charge).collect(),
            )),
            None => Ok(b),
        }
    }
}
