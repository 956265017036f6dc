//! Complex literals: `a`, `bi`, `a+bi`, `a-bi` (also with `j`), or `a,b`.
//! Lists separate items with `;`; commas separate items only where the
//! expected length says so.

use qrh_core::Complex64;

use crate::error::CliError;

pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::malformed(format!("malformed number '{s}'")))?;
    if !v.is_finite() {
        return Err(CliError::malformed(format!("non-finite number '{s}'")));
    }
    Ok(v)
}

fn signed_unit(s: &str) -> Result<f64, CliError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s),
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    parse_complex_inner(s).map_err(|_| CliError::malformed(format!("malformed complex literal '{s}'")))
}

fn parse_complex_inner(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(CliError::malformed("empty complex literal"));
    }
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(parse_real(re)?, parse_real(im)?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k])?, signed_unit(&body[k..])?)),
        None => Ok(Complex64::new(0.0, signed_unit(body)?)),
    }
}

/// A list of complex literals. With `expected = Some(n)` and no `;`, the
/// string is split on commas when that gives exactly `n` items and read as a
/// single `a,b` literal when `n = 1`.
pub fn parse_complex_list(s: &str, expected: Option<usize>) -> Result<Vec<Complex64>, CliError> {
    let items: Vec<&str> = if s.contains(';') {
        s.split(';').collect()
    } else {
        let parts: Vec<&str> = s.split(',').collect();
        match expected {
            Some(1) => vec![s],
            _ if parts.len() > 1 => parts,
            _ => vec![s],
        }
    };
    let out = items.iter().map(|p| parse_complex(p)).collect::<Result<Vec<_>, _>>()?;
    if let Some(n) = expected {
        if out.len() != n {
            return Err(CliError::usage(format!("expected {n} values, got {} in '{s}'", out.len())));
        }
    }
    Ok(out)
}

pub fn parse_reals(s: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let out = s.split(',').map(parse_real).collect::<Result<Vec<_>, _>>()?;
    if out.len() != n {
        return Err(CliError::usage(format!("expected {n} comma-separated numbers, got '{s}'")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn literal_forms() {
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), c(0.0, -2.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("0.5+1j").unwrap(), c(0.5, 1.0));
        assert_eq!(parse_complex("1e-3-2E+2i").unwrap(), c(1e-3, -200.0));
        assert_eq!(parse_complex("-1.5e-2i").unwrap(), c(0.0, -0.015));
        assert_eq!(parse_complex("3,-4").unwrap(), c(3.0, -4.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
    }

    #[test]
    fn malformed_literals() {
        for s in ["", "abc", "1+", "1+2", "1,2,3", "nan", "inf", "1+xi", "++1i"] {
            let e = parse_complex(s).unwrap_err();
            assert_eq!(e.code, crate::error::EXIT_DATA, "{s}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(parse_complex_list("1,1", Some(2)).unwrap(), vec![c(1.0, 0.0); 2]);
        assert_eq!(parse_complex_list("1,1", Some(1)).unwrap(), vec![c(1.0, 1.0)]);
        assert_eq!(parse_complex_list("1+i;2", None).unwrap(), vec![c(1.0, 1.0), c(2.0, 0.0)]);
        assert_eq!(parse_complex_list("2-i", None).unwrap(), vec![c(2.0, -1.0)]);
        assert!(parse_complex_list("1;2;3", Some(2)).is_err());
    }
}
