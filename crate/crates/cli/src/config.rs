use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::Format;

pub const DEFAULT_SEED: u64 = 42;

/// Settings read from `--config`; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    /// Per-suite tolerance overrides.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Truncation orders: `gamma2` and `f` set the number of asymptotic tail
    /// terms of the double gamma evaluation.
    #[serde(default)]
    pub orders: BTreeMap<String, usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub digits: Option<u8>,
}

pub const KNOWN_ORDERS: &[&str] = &["gamma2", "f"];

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::no_input(format!("cannot read {}: {e}", path.display())))?;
        let cfg: CliConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::malformed(format!("malformed config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(d) = self.digits {
            check_digits(d)?;
        }
        for (k, v) in &self.tolerances {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(CliError::malformed(format!("tolerance for {k} must be a non-negative number")));
            }
        }
        for k in self.orders.keys() {
            if !KNOWN_ORDERS.contains(&k.as_str()) {
                return Err(CliError::malformed(format!(
                    "unknown truncation order '{k}' (known: {})",
                    KNOWN_ORDERS.join(", ")
                )));
            }
        }
        Ok(())
    }
}

pub fn check_digits(d: u8) -> Result<(), CliError> {
    if (1..=17).contains(&d) {
        Ok(())
    } else {
        Err(CliError::usage(format!("--digits must be between 1 and 17, got {d}")))
    }
}
