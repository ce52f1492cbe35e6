//! Heron's square root differentiated two ways: by unrolling the loop and
//! by the two-phase implicit rule.

use super::overrides::*;
use super::{float, CsvRecord};
use crate::ad::Dual;
use crate::error::{Error, Result};
use crate::highlevel::{fixed_point_implicit, heron_sqrt_lowlevel, FixedPointProblem, HeronMap, DEFAULT_MAX_ITERS};

#[derive(Debug, Clone, PartialEq)]
pub struct HeronConfig {
    pub tol: f64,
    pub a_grid: Vec<f64>,
    pub x0_grid: Vec<f64>,
    /// Also run each `a` from the exact guess `x0 = sqrt(a)`.
    pub exact_guess: bool,
}

impl Default for HeronConfig {
    fn default() -> Self {
        HeronConfig {
            tol: 1e-6,
            a_grid: vec![0.5, 1.0, 2.0, 3.0, 5.0],
            x0_grid: (0..10).map(|k| 0.5 + 9.5 * k as f64 / 9.0).collect(),
            exact_guess: true,
        }
    }
}

impl Configurable for HeronConfig {
    const KEYS: &'static [&'static str] = &["tol", "a_grid", "x0_grid", "exact_guess"];

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "tol" => self.tol = parse_f64(key, v)?,
            "a_grid" => self.a_grid = parse_f64_list(key, v)?,
            "x0_grid" => self.x0_grid = parse_f64_list(key, v)?,
            "exact_guess" => self.exact_guess = parse_bool(key, v)?,
            _ => return Err(unknown_key("heron", key, Self::KEYS)),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::invalid("heron: tol must be positive"));
        }
        if self.a_grid.iter().chain(&self.x0_grid).any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid("heron: a and x0 values must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeronRecord {
    pub a: f64,
    pub x0: f64,
    pub iters: usize,
    pub primal_err: f64,
    pub ad_loop_deriv_err: f64,
    pub implicit_deriv_err: f64,
}

impl CsvRecord for HeronRecord {
    const HEADER: &'static [&'static str] =
        &["a", "x0", "iters", "primal_err", "ad_loop_deriv_err", "implicit_deriv_err"];

    fn fields(&self) -> Vec<String> {
        vec![
            float(self.a),
            float(self.x0),
            self.iters.to_string(),
            float(self.primal_err),
            float(self.ad_loop_deriv_err),
            float(self.implicit_deriv_err),
        ]
    }
}

fn heron_row(a: f64, x0: f64, tol: f64) -> Result<HeronRecord> {
    let root = a.sqrt();
    let exact = 0.5 / root;
    let (x, iters) = heron_sqrt_lowlevel(Dual::variable(a), Dual::constant(x0), tol, DEFAULT_MAX_ITERS)?;
    let problem = FixedPointProblem::new(HeronMap, x0, tol, tol, DEFAULT_MAX_ITERS)?;
    let implicit = fixed_point_implicit(&problem, a)?;
    Ok(HeronRecord {
        a,
        x0,
        iters,
        primal_err: (x.value - root).abs(),
        ad_loop_deriv_err: (x.tangent - exact).abs(),
        implicit_deriv_err: (implicit.dx_dtheta - exact).abs(),
    })
}

pub fn run_heron(cfg: &HeronConfig) -> Result<Vec<HeronRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &a in &cfg.a_grid {
        for &x0 in &cfg.x0_grid {
            out.push(heron_row(a, x0, cfg.tol)?);
        }
        if cfg.exact_guess {
            out.push(heron_row(a, a.sqrt(), cfg.tol)?);
        }
    }
    Ok(out)
}
