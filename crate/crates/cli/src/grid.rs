//! Rectangular and annular `t`-grids, evaluated in parallel and emitted in
//! row-major order.

use std::f64::consts::PI;
use std::fmt::Write;

use qrh_core::Complex64;
use rayon::prelude::*;

use crate::error::CliError;
use crate::eval::{Prepared, Status};
use crate::output::{plain, real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `Re t in [a, b]`, `Im t in [c, d]`.
    Rect { re: [f64; 2], im: [f64; 2] },
    /// `|t| in [r0, r1]`, `arg t in [p0, p1]` (radians).
    Annulus { r: [f64; 2], phase: [f64; 2] },
}

fn lerp(range: [f64; 2], k: usize, n: usize) -> f64 {
    if n == 1 {
        range[0]
    } else {
        range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64
    }
}

impl Shape {
    pub fn rect(v: &[f64]) -> Result<Self, CliError> {
        Ok(Shape::Rect { re: [v[0], v[1]], im: [v[2], v[3]] })
    }

    pub fn annulus(v: &[f64]) -> Result<Self, CliError> {
        if !(v[0] > 0.0 && v[1] > 0.0) {
            return Err(CliError::usage("annulus radii must be positive"));
        }
        if (v[3] - v[2]).abs() > 2.0 * PI + 1e-12 {
            return Err(CliError::usage("annulus phase range exceeds one turn"));
        }
        Ok(Shape::Annulus { r: [v[0], v[1]], phase: [v[2], v[3]] })
    }

    /// Points in row-major order: `n1` columns along the first coordinate
    /// (`Re t` or `|t|`), `n2` rows along the second.
    pub fn points(&self, n1: usize, n2: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n1 * n2);
        for j in 0..n2 {
            for i in 0..n1 {
                out.push(match *self {
                    Shape::Rect { re, im } => Complex64::new(lerp(re, i, n1), lerp(im, j, n2)),
                    Shape::Annulus { r, phase } => Complex64::from_polar(lerp(r, i, n1), lerp(phase, j, n2)),
                });
            }
        }
        out
    }
}

pub const HEADER: &str = "t_re,t_im,value_re,value_im,status";

pub fn csv(f: &Prepared, shape: &Shape, n1: usize, n2: usize, log: bool, digits: Option<u8>) -> String {
    let rows: Vec<(Complex64, Result<Complex64, Status>)> =
        shape.points(n1, n2).into_par_iter().map(|t| (t, f.evaluate(Some(t), log).map(|e| e.value))).collect();
    let mut out = String::with_capacity(64 * rows.len());
    out.push_str(HEADER);
    out.push('\n');
    for (t, r) in rows {
        let (v, status) = match r {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => (Some(v), "ok"),
            Ok(_) => (None, "error"),
            Err(s) => (None, s.label()),
        };
        let (vr, vi) = match v {
            Some(v) => (real(v.re, digits), real(v.im, digits)),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{},{},{vr},{vi},{status}", plain(t.re), plain(t.im)).expect("writing to a String");
    }
    out
}
