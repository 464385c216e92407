//! Suite configuration: the master seed, the root orders mixed into the
//! vertex checks, and per-check tolerance / sample-count overrides.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Index convention of the three-space vertex relation. Exactly one value
/// is supported; the field exists so reports state it explicitly and so a
/// config written against a different convention fails to load instead of
/// silently checking something else.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YbeConvention {
    /// The three operators act on space pairs (1,2), (1,3), (2,3) from left
    /// to right on the left-hand side, rows index the outgoing state pair,
    /// and the rapidity arguments are (x,y), (x,z), (y,z).
    #[default]
    AscendingPairs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Master seed; every check derives its own stream from this and its
    /// name, so adding a check does not shift the draws of the others.
    pub seed: u64,
    /// Root-of-unity orders mixed into the q sampling of the vertex checks.
    #[serde(alias = "N_list")]
    pub n_list: Vec<u32>,
    /// Tolerance overrides keyed by check name. The longest key that is a
    /// prefix of the check name wins; the empty key matches every check.
    pub tolerances: BTreeMap<String, f64>,
    /// Sample-count overrides, same key semantics as `tolerances`.
    pub sample_counts: BTreeMap<String, usize>,
    pub ybe_convention: YbeConvention,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            n_list: vec![2, 3, 4, 5, 6, 7],
            tolerances: BTreeMap::new(),
            sample_counts: BTreeMap::new(),
            ybe_convention: YbeConvention::AscendingPairs,
        }
    }
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let config: SuiteConfig = serde_json::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_list.is_empty() {
            return Err(ConfigError::Invalid("n_list must not be empty".into()));
        }
        if let Some(n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(ConfigError::Invalid(format!("root order {n} is below 2")));
        }
        for (name, &tol) in &self.tolerances {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(ConfigError::Invalid(format!(
                    "tolerance for {name:?} must be a positive finite number, got {tol}"
                )));
            }
        }
        for (name, &count) in &self.sample_counts {
            if count == 0 {
                return Err(ConfigError::Invalid(format!(
                    "sample count for {name:?} must be at least 1"
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, check: &str, default: f64) -> f64 {
        longest_prefix(&self.tolerances, check)
            .copied()
            .unwrap_or(default)
    }

    pub fn samples_for(&self, check: &str, default: usize) -> usize {
        longest_prefix(&self.sample_counts, check)
            .copied()
            .unwrap_or(default)
    }
}

fn longest_prefix<'a, V>(map: &'a BTreeMap<String, V>, check: &str) -> Option<&'a V> {
    map.iter()
        .filter(|(key, _)| check.starts_with(key.as_str()))
        .max_by_key(|(key, _)| key.len())
        .map(|(_, value)| value)
}
