//! Strict TOML suite configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

/// Top-level config file. Unknown keys are rejected; suite-specific
/// parameters live under `[params]` and are parsed strictly per suite.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// optional suite name; must agree with the CLI positional when present
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// per-check tolerance overrides, keyed by check id
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub params: toml::Table,
}

impl SuiteConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Typed view of `[params]`; empty tables fall back to defaults.
    pub fn typed_params<T: DeserializeOwned + Default>(&self) -> Result<T, CliError> {
        if self.params.is_empty() {
            return Ok(T::default());
        }
        toml::Value::Table(self.params.clone())
            .try_into()
            .map_err(|e| CliError::Config(format!("bad [params]: {e}")))
    }

    /// Seed is mandatory for Monte-Carlo suites.
    pub fn require_seed(&self, suite: &str) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::Config(format!(
                "suite `{suite}` draws random samples; a seed is mandatory (config key `seed` or --seed)"
            ))
        })
    }
}
