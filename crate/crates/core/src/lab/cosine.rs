//! Time average of `cos(omega t)` over `[0, T]`. The exact average tends to
//! zero while its derivative in `omega` keeps oscillating with amplitude ~1.

use super::overrides::*;
use super::{float, CsvRecord};
use crate::ad::{Dual, Scalar};
use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct CosineConfig {
    pub omega: f64,
    pub t_grid: Vec<f64>,
    pub fd_h: f64,
}

impl Default for CosineConfig {
    fn default() -> Self {
        CosineConfig {
            omega: 1.0,
            t_grid: vec![0.0, 10.0, 2.0 * PI * 16.0, 100.0, 2.0 * PI * 159.0, 1000.0, 10000.0, 2.0 * PI * 1592.0],
            fd_h: 0.1,
        }
    }
}

impl Configurable for CosineConfig {
    const KEYS: &'static [&'static str] = &["omega", "T_grid", "fd_h"];

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "omega" => self.omega = parse_f64(key, v)?,
            "T_grid" => self.t_grid = parse_f64_list(key, v)?,
            "fd_h" => self.fd_h = parse_f64(key, v)?,
            _ => return Err(unknown_key("cosine", key, Self::KEYS)),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid("cosine: omega must be positive"));
        }
        if !(self.fd_h > 0.0 && self.fd_h < self.omega) {
            return Err(Error::invalid("cosine: fd_h must be in (0, omega)"));
        }
        if self.t_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::invalid("cosine: horizons must be finite and >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineRecord {
    pub omega: f64,
    pub t: f64,
    pub l: f64,
    pub ad_dldomega: f64,
    pub fd_dldomega: f64,
}

impl CsvRecord for CosineRecord {
    const HEADER: &'static [&'static str] = &["omega", "T", "L", "ad_dLdomega", "fd_dLdomega"];

    fn fields(&self) -> Vec<String> {
        [self.omega, self.t, self.l, self.ad_dldomega, self.fd_dldomega].into_iter().map(float).collect()
    }
}

/// `L(omega, T) = sin(omega T) / (omega T)`, the exact average of
/// `cos(omega t)` over `[0, T]`.
pub fn sinc_average<S: Scalar>(omega: S, t: f64) -> Result<S> {
    let wt = omega * t;
    if wt.value() == 0.0 {
        return Err(Error::invalid("cosine average is undefined at omega*T = 0; use the T = 0 limit L = 1"));
    }
    Ok(wt.sin() / wt)
}

pub fn run_cosine(cfg: &CosineConfig) -> Result<Vec<CosineRecord>> {
    cfg.validate()?;
    let w = cfg.omega;
    let h = cfg.fd_h;
    cfg.t_grid
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(CosineRecord { omega: w, t, l: 1.0, ad_dldomega: 0.0, fd_dldomega: 0.0 });
            }
            let l = sinc_average(Dual::variable(w), t)?;
            let fd = (sinc_average(w + h, t)? - sinc_average(w - h, t)?) / (2.0 * h);
            Ok(CosineRecord { omega: w, t, l: l.value, ad_dldomega: l.tangent, fd_dldomega: fd })
        })
        .collect()
}
