//! Flat `key = value` configuration mirroring the command-line flags.
//!
//! ```text
//! # coverage at desk scale
//! dist = normal, t5
//! rho = 0
//! rho = 0.5
//! n = 10, 50, 500
//! reps = 10000
//! seed = 42
//! ```
//!
//! List keys (`dist`, `rho`, `n`) accept comma-separated values and may be
//! repeated. Values given on the command line replace the file's values.

use std::path::PathBuf;

use thiserror::Error;

use super::{ExperimentConfig, SimEstimator};
use crate::elliptical::Family;
use crate::location::LocationMethod;
use crate::scale::ScaleMethod;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct SettingsError(pub String);

/// Partially specified run settings, from a config file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub dists: Vec<Family>,
    pub rhos: Vec<f64>,
    pub ns: Vec<usize>,
    pub estimators: Vec<SimEstimator>,
    pub reps: Option<usize>,
    pub level: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub table: Option<bool>,
    pub scale: Option<ScaleMethod>,
    pub location: Option<LocationMethod>,
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str, line: usize) -> Result<T, SettingsError> {
    raw.parse()
        .map_err(|_| SettingsError(format!("line {line}: invalid value '{raw}' for '{key}'")))
}

fn parse_bool(raw: &str, line: usize) -> Result<bool, SettingsError> {
    match raw {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(SettingsError(format!("line {line}: expected a boolean, got '{raw}'"))),
    }
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, SettingsError> {
        let mut s = Settings::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| SettingsError(format!("line {line_no}: expected 'key = value'")))?;
            let key = key.trim().trim_start_matches("--");
            let value = value.trim();
            let items = || value.split(',').map(str::trim).filter(|v| !v.is_empty());
            match key {
                "dist" => {
                    for v in items() {
                        s.dists.push(parse_value(key, v, line_no)?);
                    }
                }
                "rho" => {
                    for v in items() {
                        s.rhos.push(parse_value(key, v, line_no)?);
                    }
                }
                "n" => {
                    for v in items() {
                        s.ns.push(parse_value(key, v, line_no)?);
                    }
                }
                "estimator" => {
                    for v in items() {
                        s.estimators.push(parse_value(key, v, line_no)?);
                    }
                }
                "reps" => s.reps = Some(parse_value(key, value, line_no)?),
                "level" => s.level = Some(parse_value(key, value, line_no)?),
                "seed" => s.seed = Some(parse_value(key, value, line_no)?),
                "threads" => s.threads = Some(parse_value(key, value, line_no)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "table" => s.table = Some(parse_bool(value, line_no)?),
                "scale" => s.scale = Some(parse_value(key, value, line_no)?),
                "location" => s.location = Some(parse_value(key, value, line_no)?),
                other => {
                    return Err(SettingsError(format!("line {line_no}: unknown key '{other}'")))
                }
            }
        }
        Ok(s)
    }

    /// `self` with every value present in `overrides` replaced.
    pub fn overridden_by(mut self, overrides: Settings) -> Settings {
        if !overrides.dists.is_empty() {
            self.dists = overrides.dists;
        }
        if !overrides.rhos.is_empty() {
            self.rhos = overrides.rhos;
        }
        if !overrides.ns.is_empty() {
            self.ns = overrides.ns;
        }
        if !overrides.estimators.is_empty() {
            self.estimators = overrides.estimators;
        }
        self.reps = overrides.reps.or(self.reps);
        self.level = overrides.level.or(self.level);
        self.seed = overrides.seed.or(self.seed);
        self.threads = overrides.threads.or(self.threads);
        self.out = overrides.out.or(self.out);
        self.table = overrides.table.or(self.table);
        self.scale = overrides.scale.or(self.scale);
        self.location = overrides.location.or(self.location);
        self
    }

    /// Fills unspecified values from [`ExperimentConfig::default`].
    pub fn experiment_config(&self) -> ExperimentConfig {
        let d = ExperimentConfig::default();
        ExperimentConfig {
            families: if self.dists.is_empty() { d.families } else { self.dists.clone() },
            rhos: if self.rhos.is_empty() { d.rhos } else { self.rhos.clone() },
            ns: if self.ns.is_empty() { d.ns } else { self.ns.clone() },
            reps: self.reps.unwrap_or(d.reps),
            level: self.level.unwrap_or(d.level),
            estimators: if self.estimators.is_empty() {
                d.estimators
            } else {
                self.estimators.clone()
            },
            master_seed: self.seed.unwrap_or(d.master_seed),
            threads: self.threads.or(d.threads),
            scale: self.scale.unwrap_or(d.scale),
            location: self.location.clone().unwrap_or(d.location),
        }
    }
}
