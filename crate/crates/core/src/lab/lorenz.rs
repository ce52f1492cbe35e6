//! Time-averaged Lorenz-63 state. Once the trajectory is chaotic, AD
//! derivatives of a finite-window average grow exponentially with the window
//! while coarse finite differences stay bounded.

use super::overrides::*;
use super::CsvRecord;
use crate::ad::{Dual, Scalar};
use crate::error::{Error, Result};

pub const BLOW_UP_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct LorenzConfig {
    pub sigma: f64,
    pub beta: f64,
    pub rho_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub dt: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub fd_h: f64,
}

impl Default for LorenzConfig {
    fn default() -> Self {
        LorenzConfig {
            sigma: 10.0,
            beta: 8.0 / 3.0,
            rho_grid: vec![27.9, 28.0, 28.1],
            t_grid: vec![5.0, 10.0, 15.0, 20.0],
            dt: 0.01,
            x0: 1.0,
            y0: 1.0,
            z0: 1.0,
            fd_h: 0.1,
        }
    }
}

impl Configurable for LorenzConfig {
    const KEYS: &'static [&'static str] = &["sigma", "beta", "rho_grid", "T_grid", "dt", "x0", "y0", "z0", "fd_h"];

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "sigma" => self.sigma = parse_f64(key, v)?,
            "beta" => self.beta = parse_f64(key, v)?,
            "rho_grid" => self.rho_grid = parse_f64_list(key, v)?,
            "T_grid" => self.t_grid = parse_f64_list(key, v)?,
            "dt" => self.dt = parse_f64(key, v)?,
            "x0" => self.x0 = parse_f64(key, v)?,
            "y0" => self.y0 = parse_f64(key, v)?,
            "z0" => self.z0 = parse_f64(key, v)?,
            "fd_h" => self.fd_h = parse_f64(key, v)?,
            _ => return Err(unknown_key("lorenz", key, Self::KEYS)),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.fd_h > 0.0) {
            return Err(Error::invalid("lorenz: dt and fd_h must be positive"));
        }
        for &t in &self.t_grid {
            steps_for(t, self.dt)?;
        }
        Ok(())
    }
}

fn steps_for(t: f64, dt: f64) -> Result<usize> {
    let n = (t / dt).round();
    if !(t >= 0.0) || (n * dt - t).abs() > 1e-9 {
        return Err(Error::invalid(format!("lorenz: horizon {t} is not a non-negative multiple of dt = {dt}")));
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzRecord {
    pub rho: f64,
    pub t: f64,
    pub j: f64,
    pub ad_djdrho: f64,
    pub fd_djdrho: f64,
}

impl CsvRecord for LorenzRecord {
    const HEADER: &'static [&'static str] = &["rho", "T", "J", "ad_dJdrho", "fd_dJdrho"];

    fn fields(&self) -> Vec<String> {
        [self.rho, self.t, self.j, self.ad_djdrho, self.fd_djdrho]
            .iter()
            .map(|v| format!("{v:?}"))
            .collect()
    }
}

fn rhs<S: Scalar>(s: [S; 3], sigma: f64, rho: S, beta: f64) -> [S; 3] {
    let [x, y, z] = s;
    [(y - x) * sigma, x * (rho - z) - y, x * y - z * beta]
}

fn axpy<S: Scalar>(s: [S; 3], k: [S; 3], a: f64) -> [S; 3] {
    [s[0] + k[0] * a, s[1] + k[1] * a, s[2] + k[2] * a]
}

/// `J(rho, T)`: trapezoidal time average of `z` over `[0, T]` along a
/// classical RK4 trajectory. `J(rho, 0) = z0`.
pub fn time_average_z<S: Scalar>(cfg: &LorenzConfig, rho: S, t: f64) -> Result<S> {
    let n = steps_for(t, cfg.dt)?;
    let mut s = [S::constant(cfg.x0), S::constant(cfg.y0), S::constant(cfg.z0)];
    if n == 0 {
        return Ok(s[2]);
    }
    let dt = cfg.dt;
    let mut acc = s[2] * 0.5;
    for step in 1..=n {
        let k1 = rhs(s, cfg.sigma, rho, cfg.beta);
        let k2 = rhs(axpy(s, k1, 0.5 * dt), cfg.sigma, rho, cfg.beta);
        let k3 = rhs(axpy(s, k2, 0.5 * dt), cfg.sigma, rho, cfg.beta);
        let k4 = rhs(axpy(s, k3, dt), cfg.sigma, rho, cfg.beta);
        for i in 0..3 {
            s[i] = s[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        let magnitude = s.iter().fold(0.0f64, |m, v| m.max(v.value().abs()));
        if !(magnitude <= BLOW_UP_LIMIT) {
            return Err(Error::BlowUp { time: step as f64 * dt, magnitude });
        }
        acc = if step == n { acc + s[2] * 0.5 } else { acc + s[2] };
    }
    Ok(acc / n as f64)
}

pub fn run_lorenz(cfg: &LorenzConfig) -> Result<Vec<LorenzRecord>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.rho_grid.len() * cfg.t_grid.len());
    for &rho in &cfg.rho_grid {
        for &t in &cfg.t_grid {
            let j = time_average_z(cfg, Dual::variable(rho), t)?;
            let jp: f64 = time_average_z(cfg, rho + cfg.fd_h, t)?;
            let jm: f64 = time_average_z(cfg, rho - cfg.fd_h, t)?;
            out.push(LorenzRecord {
                rho,
                t,
                j: j.value,
                ad_djdrho: j.tangent,
                fd_djdrho: (jp - jm) / (2.0 * cfg.fd_h),
            });
        }
    }
    Ok(out)
}
