//! Midpoint-rule integral of a rectangle up to `x`. The result is a
//! staircase in `x`, so AD sees a zero derivative almost everywhere.

use super::overrides::*;
use super::{float, CsvRecord};
use crate::ad::{Dual, Scalar};
use crate::error::{Error, Result};

/// Distance below which `x` counts as sitting on a sample point.
pub const JUMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub rect_lo: f64,
    pub rect_hi: f64,
    pub n_grid: Vec<usize>,
    pub x_grid: Vec<f64>,
    pub fd_h: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rect_lo: 0.25,
            rect_hi: 0.75,
            n_grid: vec![10, 100, 1000],
            x_grid: (0..=20).map(|k| k as f64 / 20.0).collect(),
            fd_h: 0.05,
        }
    }
}

impl Configurable for QuadratureConfig {
    const KEYS: &'static [&'static str] = &["rect_lo", "rect_hi", "N_grid", "x_grid", "fd_h"];

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "rect_lo" => self.rect_lo = parse_f64(key, v)?,
            "rect_hi" => self.rect_hi = parse_f64(key, v)?,
            "N_grid" => self.n_grid = parse_usize_list(key, v)?,
            "x_grid" => self.x_grid = parse_f64_list(key, v)?,
            "fd_h" => self.fd_h = parse_f64(key, v)?,
            _ => return Err(unknown_key("quadrature", key, Self::KEYS)),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(0.0 <= self.rect_lo && self.rect_lo < self.rect_hi && self.rect_hi <= 1.0) {
            return Err(Error::invalid("quadrature: need 0 <= rect_lo < rect_hi <= 1"));
        }
        if self.n_grid.contains(&0) {
            return Err(Error::invalid("quadrature: sample counts must be >= 1"));
        }
        if !(self.fd_h > 0.0 && self.fd_h.is_finite()) || self.x_grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("quadrature: fd_h must be positive and x_grid finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRecord {
    pub n: usize,
    pub x: f64,
    pub f: f64,
    pub ad_dfdx: f64,
    pub fd_dfdx: f64,
    pub at_jump: bool,
}

impl CsvRecord for QuadratureRecord {
    const HEADER: &'static [&'static str] = &["N", "x", "F", "ad_dFdx", "fd_dFdx", "flag"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            float(self.x),
            float(self.f),
            float(self.ad_dfdx),
            float(self.fd_dfdx),
            if self.at_jump { "jump" } else { "ok" }.to_string(),
        ]
    }
}

fn midpoint(i: usize, n: usize) -> f64 {
    (i as f64 + 0.5) / n as f64
}

/// `F(x) = (1/N) sum_i [t_i < x] rect(t_i)` over midpoints `t_i`. The
/// comparison with `x` only looks at its value, so nothing in the sum
/// depends on `x` as far as AD is concerned.
pub fn staircase<S: Scalar>(x: S, n: usize, rect_lo: f64, rect_hi: f64) -> S {
    let weight = 1.0 / n as f64;
    let mut acc = S::constant(0.0);
    for i in 0..n {
        let t = midpoint(i, n);
        if t < x.value() && rect_lo < t && t < rect_hi {
            acc = acc + weight;
        }
    }
    acc
}

pub fn run_quadrature(cfg: &QuadratureConfig) -> Result<Vec<QuadratureRecord>> {
    cfg.validate()?;
    let (lo, hi, h) = (cfg.rect_lo, cfg.rect_hi, cfg.fd_h);
    let mut out = Vec::with_capacity(cfg.n_grid.len() * cfg.x_grid.len());
    for &n in &cfg.n_grid {
        for &x in &cfg.x_grid {
            let f = staircase(Dual::variable(x), n, lo, hi);
            let fd = (staircase(x + h, n, lo, hi) - staircase(x - h, n, lo, hi)) / (2.0 * h);
            let at_jump = (0..n).any(|i| (midpoint(i, n) - x).abs() < JUMP_TOL);
            out.push(QuadratureRecord { n, x, f: f.value, ad_dfdx: f.tangent, fd_dfdx: fd, at_jump });
        }
    }
    Ok(out)
}
