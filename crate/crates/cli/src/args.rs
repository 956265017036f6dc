//! `--key value` lists for `eval` and `grid`.

use std::collections::BTreeMap;

use qrh_core::rhsolver::Side;
use qrh_core::Complex64;

use crate::error::CliError;
use crate::literal::{parse_complex, parse_complex_list};

/// Global flags that may also appear after the function name.
pub const GLOBAL_KEYS: &[&str] = &["seed", "tol", "format", "digits", "config"];

#[derive(Debug, Default)]
pub struct ArgMap {
    values: BTreeMap<String, Option<String>>,
    /// Global flags found among the arguments.
    pub globals: Vec<(String, String)>,
}

impl ArgMap {
    /// Splits `--key value` pairs; a key followed by another key (or nothing)
    /// is a switch. `flags` lists the switches that never take a value.
    pub fn parse(tokens: &[String], flags: &[&str]) -> Result<Self, CliError> {
        let mut out = ArgMap::default();
        let mut it = tokens.iter().peekable();
        while let Some(tok) = it.next() {
            let Some(key) = tok.strip_prefix("--") else {
                return Err(CliError::usage(format!("unexpected argument '{tok}'")));
            };
            let (key, inline) = match key.split_once('=') {
                Some((k, v)) => (k, Some(v.to_string())),
                None => (key, None),
            };
            let value = if inline.is_some() || flags.contains(&key) {
                inline
            } else {
                match it.peek() {
                    Some(v) if !v.starts_with("--") => it.next().cloned(),
                    _ => None,
                }
            };
            if GLOBAL_KEYS.contains(&key) {
                let v = value.ok_or_else(|| CliError::usage(format!("--{key} needs a value")))?;
                out.globals.push((key.to_string(), v));
                continue;
            }
            if out.values.insert(key.to_string(), value).is_some() {
                return Err(CliError::usage(format!("--{key} given twice")));
            }
        }
        Ok(out)
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, function: &str, allowed: &[&str]) -> Result<(), CliError> {
        for k in self.values.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(CliError::usage(format!(
                    "{function} does not take --{k} (accepted: {})",
                    allowed.iter().map(|a| format!("--{a}")).collect::<Vec<_>>().join(" ")
                )));
            }
        }
        Ok(())
    }

    /// Removes `key`, returning its value (`Some(None)` for a bare switch).
    pub fn take(&mut self, key: &str) -> Option<Option<String>> {
        self.values.remove(key)
    }

    pub fn flag(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Result<&str, CliError> {
        match self.values.get(key) {
            Some(Some(v)) => Ok(v),
            Some(None) => Err(CliError::usage(format!("--{key} needs a value"))),
            None => Err(CliError::usage(format!("missing --{key}"))),
        }
    }

    pub fn complex(&self, key: &str) -> Result<Complex64, CliError> {
        parse_complex(self.raw(key)?)
    }

    pub fn complex_or(&self, key: &str, default: Complex64) -> Result<Complex64, CliError> {
        if self.has(key) {
            self.complex(key)
        } else {
            Ok(default)
        }
    }

    pub fn complex_list(&self, key: &str, expected: Option<usize>) -> Result<Vec<Complex64>, CliError> {
        parse_complex_list(self.raw(key)?, expected)
    }

    pub fn int(&self, key: &str) -> Result<i64, CliError> {
        let s = self.raw(key)?;
        s.trim().parse().map_err(|_| CliError::malformed(format!("--{key}: malformed integer '{s}'")))
    }

    pub fn int_or(&self, key: &str, default: i64) -> Result<i64, CliError> {
        if self.has(key) {
            self.int(key)
        } else {
            Ok(default)
        }
    }

    pub fn int_list(&self, key: &str) -> Result<Vec<i64>, CliError> {
        let s = self.raw(key)?;
        s.split([',', ';'])
            .map(|p| {
                p.trim().parse().map_err(|_| CliError::malformed(format!("--{key}: malformed integer list '{s}'")))
            })
            .collect()
    }

    pub fn side(&self) -> Result<Side, CliError> {
        let s = if self.has("side") { self.raw("side")? } else { "+" };
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Side::Plus),
            "-" | "minus" | "-1" => Ok(Side::Minus),
            _ => Err(CliError::usage(format!("--side must be + or -, got '{s}'"))),
        }
    }
}
