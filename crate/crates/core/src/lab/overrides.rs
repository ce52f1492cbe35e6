//! Flat `key=value` configuration overrides.

use crate::error::{Error, Result};

/// Split `key=value`. Both sides must be non-empty.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => {
            Ok((k.trim().to_string(), v.trim().to_string()))
        }
        _ => Err(Error::invalid(format!("malformed override '{s}' (expected key=value)"))),
    }
}

pub fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::invalid(format!("override {key}: '{v}' is not a number")))
}

pub fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::invalid(format!("override {key}: '{v}' is not a non-negative integer")))
}

pub fn parse_bool(key: &str, v: &str) -> Result<bool> {
    v.parse::<bool>()
        .map_err(|_| Error::invalid(format!("override {key}: '{v}' is not true/false")))
}

/// Comma-separated list of numbers.
pub fn parse_f64_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| parse_f64(key, s.trim())).collect()
}

pub fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>> {
    v.split(',').map(|s| parse_usize(key, s.trim())).collect()
}

pub fn unknown_key(experiment: &str, key: &str, known: &[&str]) -> Error {
    Error::invalid(format!(
        "unknown key '{key}' for experiment {experiment} (known: {})",
        known.join(", ")
    ))
}

/// A configuration that accepts flat string overrides.
pub trait Configurable: Default {
    const KEYS: &'static [&'static str];

    fn set(&mut self, key: &str, value: &str) -> Result<()>;

    fn validate(&self) -> Result<()>;

    /// Default config with all overrides applied, validated as a whole.
    fn from_overrides(overrides: &[(String, String)]) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in overrides {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments() {
        assert_eq!(parse_assignment("dt=0.01").unwrap(), ("dt".into(), "0.01".into()));
        assert_eq!(parse_assignment("T_grid=1,2=3").unwrap().1, "1,2=3");
        assert!(parse_assignment("dt").is_err());
        assert!(parse_assignment("=3").is_err());
        assert!(parse_assignment("dt=").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_f64_list("x", "1, 2.5,1e-3").unwrap(), vec![1.0, 2.5, 1e-3]);
        assert!(parse_f64_list("x", "1,,2").is_err());
        assert_eq!(parse_usize_list("N", "10,100").unwrap(), vec![10, 100]);
        assert!(parse_usize_list("N", "-1").is_err());
    }
}
