//! Multi-step-size comparison of an AD directional derivative against
//! forward (order 1) and central (order 2) finite differences.
//!
//! Errors are kept signed: `r(h) = FD(h) - AD`. For a correct AD value
//! `r(h) = c h^p + ...` and only roundoff, roughly `C / h`, stops it from
//! vanishing. An error `delta` in the AD value adds the constant `-delta`.
//!
//! * The convergence order is the least-squares slope of
//!   `log|r(h_{i-1}) - r(h_i)|` against `log h_{i-1}` over the smaller-h half
//!   of the leading run of step sizes whose differences stand clear of
//!   roundoff. Differencing
//!   cancels the constant, so the order is measured the same way with or
//!   without an AD error.
//! * The constant itself is estimated by Richardson extrapolation of each
//!   adjacent pair of central errors, which removes the `h^2` term. The
//!   estimate from the pair whose uncertainty (roundoff plus disagreement
//!   with the next pair) is smallest is a plateau if it exceeds that
//!   uncertainty by more than [`PLATEAU_FACTOR`]: an error no step size
//!   removes, i.e. an error in the AD value.

use std::fmt;

use super::fd::{fd_central, fd_forward};
use crate::error::{Error, Result};

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Fewest error differences an order fit is based on.
pub const MIN_REGIME_POINTS: usize = 4;
pub const PLATEAU_FACTOR: f64 = 10.0;
pub const MIN_CENTRAL_SLOPE: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Suspect,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Suspect => "SUSPECT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// `n` log-spaced step sizes from `largest` down to `smallest`.
pub fn log_spaced(largest: f64, smallest: f64, n: usize) -> Vec<f64> {
    let (a, b) = (largest.log10(), smallest.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1).max(1) as f64))
        .collect()
}

/// 24 points from 1e-1 to 1e-12.
pub fn default_h_grid() -> Vec<f64> {
    log_spaced(1e-1, 1e-12, 24)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub h_grid: Vec<f64>,
    /// `|forward FD - AD|` per step size.
    pub fd1_error: Vec<f64>,
    /// `|central FD - AD|` per step size.
    pub fd2_error: Vec<f64>,
    /// Fitted convergence order of the forward difference.
    pub slope1: Option<f64>,
    /// Fitted convergence order of the central difference.
    pub slope2: Option<f64>,
    /// Number of central-error differences the order fit used.
    pub regime2_len: usize,
    /// Extrapolated `FD - AD` as `h -> 0` with its uncertainty.
    pub offset: Option<(f64, f64)>,
    /// `|offset|` when it is resolved above its uncertainty.
    pub plateau: Option<f64>,
    /// Roundoff constant `C` in the floor `C / h`.
    pub roundoff_constant: f64,
    pub ad_directional: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl GradCheckReport {
    /// One `CHECK` line in the text report format.
    pub fn summary_line(&self, name: &str) -> String {
        let metric = match (self.plateau, self.slope2) {
            (Some(p), _) => format!("plateau={p:e}"),
            (None, Some(s)) => format!("slope2={s:.3}"),
            (None, None) => format!("max_fd2_error={:e}", self.fd2_error.iter().cloned().fold(0.0, f64::max)),
        };
        format!("CHECK {name}: {} — {metric}", self.verdict)
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("h,fd1_error,fd2_error\n");
        for ((h, e1), e2) in self.h_grid.iter().zip(&self.fd1_error).zip(&self.fd2_error) {
            s.push_str(&format!("{h:?},{e1:?},{e2:?}\n"));
        }
        s
    }
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Estimate `C` in the roundoff floor `C / h` from the grid points well past
/// the error minimum, where roundoff dominates. Falls back to the a-priori
/// value when there are too few such points.
fn roundoff_constant(h: &[f64], e: &[f64], apriori: f64) -> f64 {
    let imin = (0..e.len()).min_by(|&a, &b| e[a].total_cmp(&e[b])).unwrap_or(0);
    let tail: Vec<f64> = (imin + 2..e.len()).map(|i| e[i] * h[i]).filter(|v| *v > 0.0).collect();
    if tail.len() >= 3 {
        median(tail)
    } else {
        apriori
    }
}

/// Order fit over the leading run of differences `r[i-1] - r[i]` that exceed
/// `PLATEAU_FACTOR` times the roundoff in them. Only the smaller-h half of
/// the run enters the fit, where the leading error term dominates. Returns
/// the order and the length of the run.
fn convergence_order(h: &[f64], r: &[f64], floor: &[f64]) -> (Option<f64>, usize) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 1..h.len() {
        let diff = (r[i - 1] - r[i]).abs();
        if !(diff > PLATEAU_FACTOR * (floor[i - 1] + floor[i])) {
            break;
        }
        xs.push(h[i - 1].ln());
        ys.push(diff.ln());
    }
    let n = xs.len();
    let start = n - (n / 2).max(MIN_REGIME_POINTS).min(n);
    ((n >= MIN_REGIME_POINTS).then(|| ols_slope(&xs[start..], &ys[start..])), n)
}

/// Richardson-extrapolated central offset with its uncertainty, from the
/// adjacent pair where that uncertainty is smallest.
fn extrapolated_offset(h: &[f64], r: &[f64], floor: &[f64]) -> Option<(f64, f64)> {
    let pairs: Vec<(f64, f64)> = (0..h.len() - 1)
        .map(|i| {
            let q = (h[i + 1] / h[i]).powi(2);
            let alpha = (r[i + 1] - q * r[i]) / (1.0 - q);
            let noise = (floor[i + 1] + q * floor[i]) / (1.0 - q);
            (alpha, noise)
        })
        .collect();
    (0..pairs.len().saturating_sub(1))
        .map(|i| (pairs[i].0, pairs[i].1 + (pairs[i].0 - pairs[i + 1].0).abs()))
        .filter(|(a, u)| a.is_finite() && u.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Compare `ad_directional` against forward and central differences of `f`
/// along `direction` at every step in `h_grid` (strictly decreasing).
pub fn gradcheck<F: Fn(&[f64]) -> f64>(
    f: F,
    ad_directional: f64,
    x: &[f64],
    direction: &[f64],
    h_grid: &[f64],
) -> Result<GradCheckReport> {
    if h_grid.len() < 3 {
        return Err(Error::invalid("gradcheck needs at least three step sizes"));
    }
    if h_grid.windows(2).any(|w| !(w[1] < w[0])) || !(h_grid[h_grid.len() - 1] > 0.0) {
        return Err(Error::invalid("gradcheck step sizes must be positive and strictly decreasing"));
    }
    let mut r1 = Vec::with_capacity(h_grid.len());
    let mut r2 = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        r1.push(fd_forward(&f, x, direction, h)? - ad_directional);
        r2.push(fd_central(&f, x, direction, h)? - ad_directional);
    }
    let fd1_error: Vec<f64> = r1.iter().map(|v| v.abs()).collect();
    let fd2_error: Vec<f64> = r2.iter().map(|v| v.abs()).collect();

    let f0 = f(x).abs();
    let dir_norm = direction.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Rounding in f(x +- h d) and in forming x +- h d itself.
    let apriori_c = UNIT_ROUNDOFF * (f0 + x_norm * dir_norm * ad_directional.abs()).max(f64::MIN_POSITIVE);
    let noise_c = roundoff_constant(h_grid, &fd2_error, apriori_c).max(apriori_c);
    let floor: Vec<f64> = h_grid
        .iter()
        .map(|h| noise_c / h + UNIT_ROUNDOFF * ad_directional.abs())
        .collect();
    let floor1: Vec<f64> = floor.iter().map(|v| 2.0 * v).collect();

    let mut notes = Vec::new();
    let (slope1, _) = convergence_order(h_grid, &r1, &floor1);
    let (slope2, regime2) = convergence_order(h_grid, &r2, &floor);
    let offset = extrapolated_offset(h_grid, &r2, &floor);
    let plateau = offset.and_then(|(a, u)| (a.abs() > PLATEAU_FACTOR * u).then_some(a.abs()));

    if let Some(p) = plateau {
        notes.push(format!("central-difference error levels off at {p:e} instead of vanishing with h"));
    }
    if let Some(s2) = slope2.filter(|s| *s < MIN_CENTRAL_SLOPE) {
        notes.push(format!("central-difference convergence order {s2:.2} below {MIN_CENTRAL_SLOPE}"));
    }
    let verdict = if plateau.is_some() || slope2.is_some_and(|s| s < MIN_CENTRAL_SLOPE) {
        Verdict::Suspect
    } else if slope2.is_some() {
        Verdict::Pass
    } else if fd2_error.iter().zip(&floor).all(|(e, b)| *e <= PLATEAU_FACTOR * b) {
        notes.push("no truncation regime: finite-difference error at roundoff floor for all h".into());
        Verdict::Pass
    } else {
        notes.push(format!(
            "inconclusive: only {regime2} error differences above roundoff (need {MIN_REGIME_POINTS})"
        ));
        Verdict::Inconclusive
    };

    Ok(GradCheckReport {
        h_grid: h_grid.to_vec(),
        fd1_error,
        fd2_error,
        slope1,
        slope2,
        regime2_len: regime2,
        offset,
        plateau,
        roundoff_constant: noise_c,
        ad_directional,
        verdict,
        notes,
    })
}
