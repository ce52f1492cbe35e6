//! Reverse mode checked against finite differences along a random direction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fd::fd_central_vec;
use super::gradcheck::Verdict;
use super::staged::Stage;
use crate::error::{Error, Result};

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

pub const CAVEAT: &str = "projection check: only errors visible along x_dot and resolvable by FD at this h are detected";

#[derive(Debug, Clone, PartialEq)]
pub struct FdVjpReport {
    pub seed: u64,
    pub x_dot: Vec<f64>,
    /// `y_bar . (central FD of f along x_dot)`.
    pub fd_value: f64,
    /// `(reverse-mode x_bar) . x_dot`.
    pub ad_value: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub note: &'static str,
}

impl FdVjpReport {
    pub fn summary_line(&self, name: &str) -> String {
        format!(
            "CHECK {name}: {} — abs_diff={:e} (tol={:e}; {})",
            self.verdict,
            (self.fd_value - self.ad_value).abs(),
            self.tolerance,
            self.note
        )
    }
}

/// Unit-norm direction drawn from a seeded generator.
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Compare `y_bar . FD(f; x, x_dot, h)` with `vjp(x, y_bar) . x_dot` for a
/// seeded random unit direction `x_dot`. The tolerance is
/// `10 (t + u (|y_bar|_1 |f(x)|_inf / h + |ad|))`, where the truncation
/// estimate `t = |FD(h) - FD(2h)| / 3` comes from the `h^2` error law.
pub fn fd_vjp_check(stage: &dyn Stage, x: &[f64], y_bar: &[f64], h: f64, seed: u64) -> Result<FdVjpReport> {
    if y_bar.len() != stage.output_dim() {
        return Err(Error::DimensionMismatch { what: "y_bar", expected: stage.output_dim(), found: y_bar.len() });
    }
    let x_dot = random_unit_vector(x.len(), seed);
    let f = |p: &[f64]| stage.eval(p).unwrap_or_else(|_| vec![f64::NAN; y_bar.len()]);
    let project = |v: Vec<f64>| -> f64 { y_bar.iter().zip(&v).map(|(a, b)| a * b).sum() };
    let fd_value = project(fd_central_vec(f, x, &x_dot, h)?);
    let fd_coarse = project(fd_central_vec(f, x, &x_dot, 2.0 * h)?);
    let x_bar = stage.vjp(x, y_bar)?;
    let ad_value: f64 = x_bar.iter().zip(&x_dot).map(|(a, b)| a * b).sum();

    let y = stage.eval(x)?;
    let y_inf = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ybar_1: f64 = y_bar.iter().map(|v| v.abs()).sum();
    let truncation = (fd_value - fd_coarse).abs() / 3.0;
    let tolerance = 10.0 * (truncation + UNIT_ROUNDOFF * (ybar_1 * y_inf / h + ad_value.abs()));
    let verdict = if (fd_value - ad_value).abs() <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Suspect
    };
    Ok(FdVjpReport { seed, x_dot, fd_value, ad_value, tolerance, verdict, note: CAVEAT })
}
