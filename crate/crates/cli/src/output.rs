use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use qrh_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `x` rounded to `digits` significant digits; unchanged for `None`.
pub fn round_sig(x: f64, digits: Option<u8>) -> f64 {
    match digits {
        Some(d) if x.is_finite() && x != 0.0 => {
            let d = d.clamp(1, 17) as usize;
            format!("{:.*e}", d - 1, x).parse().unwrap_or(x)
        }
        _ => x,
    }
}

/// Shortest round-trip representation, in exponent form outside
/// `[1e-5, 1e16)`.
pub fn plain(v: f64) -> String {
    let a = v.abs();
    if v.is_nan() {
        "nan".into()
    } else if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `x` rounded to `digits` and printed with [`plain`].
pub fn real(x: f64, digits: Option<u8>) -> String {
    plain(round_sig(x, digits))
}

/// `a`, or `a+bi`/`a-bi` when the imaginary part is non-zero.
pub fn complex(z: Complex64, digits: Option<u8>) -> String {
    let im = round_sig(z.im, digits);
    if im == 0.0 {
        return real(z.re, digits);
    }
    let sign = if im < 0.0 { "-" } else { "+" };
    format!("{}{sign}{}i", real(z.re, digits), real(im.abs(), None))
}

pub fn json_complex(z: Complex64, digits: Option<u8>) -> serde_json::Value {
    serde_json::json!({ "re": round_sig(z.re, digits), "im": round_sig(z.im, digits) })
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::cant_create(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::cant_create(format!("cannot write to stdout: {e}")))
        }
    }
}
