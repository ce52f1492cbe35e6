//! Dot-product test with split-point localization.
//!
//! For a composition of stages, the tangent is pushed forward through the
//! first `k` stages and the cotangent pulled back through the remaining
//! ones; their inner product `psi_k` at interface `k` must be the same for
//! every `k`. If stage `j` (0-based) is inconsistent, `psi_0..=psi_j` differ
//! from `psi_{j+1}..`, so the largest jump between neighbouring splits names
//! the stage.

use super::staged::{Stage, StagedProgram};
use crate::error::{Error, Result};

pub const DEFAULT_SPREAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DotProductReport {
    /// `psi_k` for split points `k = 0..=n_stages`.
    pub psi_values: Vec<f64>,
    /// `(max psi - min psi) / max |psi|`.
    pub max_rel_spread: f64,
}

impl DotProductReport {
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.max_rel_spread <= tol
    }

    /// The stage whose two sides disagree most, if the spread exceeds `tol`.
    pub fn suspect_stage(&self, tol: f64) -> Option<usize> {
        if self.is_consistent(tol) {
            return None;
        }
        (1..self.psi_values.len())
            .map(|k| (k - 1, (self.psi_values[k] - self.psi_values[k - 1]).abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(stage, _)| stage)
    }

    pub fn summary_line(&self, name: &str, tol: f64) -> String {
        let status = if self.is_consistent(tol) { "PASS" } else { "SUSPECT" };
        let mut line = format!("CHECK {name}: {status} — max_rel_spread={:e}", self.max_rel_spread);
        if let Some(s) = self.suspect_stage(tol) {
            line.push_str(&format!(" suspect_stage={s}"));
        }
        line
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("split,psi\n");
        for (k, p) in self.psi_values.iter().enumerate() {
            s.push_str(&format!("{k},{p:?}\n"));
        }
        s
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_product_test(staged: &StagedProgram, x: &[f64], x_dot: &[f64], y_bar: &[f64]) -> Result<DotProductReport> {
    let n_in = staged.input_dim();
    let n_out = staged.output_dim();
    if x.len() != n_in {
        return Err(Error::DimensionMismatch { what: "x", expected: n_in, found: x.len() });
    }
    if x_dot.len() != n_in {
        return Err(Error::DimensionMismatch { what: "x_dot", expected: n_in, found: x_dot.len() });
    }
    if y_bar.len() != n_out {
        return Err(Error::DimensionMismatch { what: "y_bar", expected: n_out, found: y_bar.len() });
    }
    if x_dot.iter().all(|v| *v == 0.0) || y_bar.iter().all(|v| *v == 0.0) {
        return Err(Error::invalid("dot-product test needs nonzero x_dot and y_bar"));
    }

    let stages = staged.stages();
    let states = staged.states(x)?;
    let n = stages.len();

    let mut tangents = vec![x_dot.to_vec()];
    for k in 0..n {
        let t = stages[k].jvp(&states[k], &tangents[k])?;
        tangents.push(t);
    }
    let mut cotangents = vec![Vec::new(); n + 1];
    cotangents[n] = y_bar.to_vec();
    for k in (0..n).rev() {
        cotangents[k] = stages[k].vjp(&states[k], &cotangents[k + 1])?;
    }

    let psi_values: Vec<f64> = (0..=n).map(|k| dot(&cotangents[k], &tangents[k])).collect();
    let hi = psi_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = psi_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = psi_values.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    let max_rel_spread = if scale > 0.0 { (hi - lo) / scale } else { 0.0 };
    Ok(DotProductReport { psi_values, max_rel_spread })
}
