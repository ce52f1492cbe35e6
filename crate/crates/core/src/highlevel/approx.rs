//! Low-level approximations of `sin` whose derivatives differ from `cos`.

use std::f64::consts::{PI, TAU};

use crate::ad::Scalar;
use crate::error::{Error, Result};

/// Precomputed `sin` on a uniform grid over `[0, 2π)`, with nearest-neighbour
/// lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct SineTable {
    samples: Vec<f64>,
}

impl SineTable {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::invalid("sine table resolution must be positive"));
        }
        let samples = (0..resolution).map(|k| Self::grid_point_of(k, resolution).sin()).collect();
        Ok(SineTable { samples })
    }

    fn grid_point_of(k: usize, n: usize) -> f64 {
        k as f64 * TAU / n as f64
    }

    pub fn resolution(&self) -> usize {
        self.samples.len()
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.resolution() as f64
    }

    pub fn grid_point(&self, k: usize) -> f64 {
        Self::grid_point_of(k, self.resolution())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Index of the nearest grid point after wrapping `x` into `[0, 2π)`.
    pub fn index(&self, x: f64) -> usize {
        let n = self.resolution();
        let w = x.rem_euclid(TAU);
        ((w / self.spacing()).round() as usize) % n
    }

    /// Distance from `x` (wrapped) to the nearest cell boundary.
    pub fn distance_to_boundary(&self, x: f64) -> f64 {
        let s = self.spacing();
        let t = x.rem_euclid(TAU) / s;
        let frac = t - t.floor();
        (frac - 0.5).abs() * s
    }
}

/// Table lookup. The index computation is not differentiable, so the result
/// is a constant for AD purposes: its derivative is 0 everywhere.
pub fn sin_lut<S: Scalar>(x: S, table: &SineTable) -> S {
    S::constant(table.samples[table.index(x.value())])
}

pub const SIN_POLY_DEGREES: [u32; 5] = [3, 5, 7, 9, 11];

/// Truncated Taylor series of `sin` about 0, valid on `[-π, π]`.
pub fn sin_poly<S: Scalar>(x: S, degree: u32) -> Result<S> {
    if !SIN_POLY_DEGREES.contains(&degree) {
        return Err(Error::invalid(format!("unsupported sin_poly degree {degree} (use 3, 5, 7, 9 or 11)")));
    }
    let xv = x.value();
    if !(-PI..=PI).contains(&xv) {
        return Err(Error::invalid(format!("sin_poly argument {xv} outside [-pi, pi]")));
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..=(degree as usize - 1) / 2 {
        let denom = ((2 * k) * (2 * k + 1)) as f64;
        term = term * x2 * (-1.0 / denom);
        sum = sum + term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::Dual;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn table_samples_are_sin_of_grid() {
        let t = SineTable::new(64).unwrap();
        for k in 0..64 {
            assert_eq!(t.samples()[k], (k as f64 * TAU / 64.0).sin());
        }
        assert!(SineTable::new(0).is_err());
    }

    #[test]
    fn lut_values_and_zero_derivative() {
        let t = SineTable::new(4096).unwrap();
        let y = sin_lut(Dual::variable(1.0), &t);
        // Nearest-neighbour error is at most half a cell times |cos| <= 1.
        assert!((y.value - 1f64.sin()).abs() <= 0.5 * t.spacing());
        assert_eq!(y.tangent, 0.0);

        let y = sin_lut(Dual::variable(0.0), &t);
        assert_eq!(y, Dual::new(0.0, 0.0));

        let y = sin_lut(Dual::variable(FRAC_PI_2), &t);
        assert!((y.value - 1.0).abs() < 1e-6);
        assert_eq!(y.tangent, 0.0);
    }

    #[test]
    fn lut_wraps_negative_and_large_inputs() {
        let t = SineTable::new(1000).unwrap();
        for x in [-1.0, -7.5, 20.0, 1e3] {
            assert!((sin_lut(x, &t) - f64::sin(x)).abs() <= 0.5 * t.spacing() + 1e-12);
        }
    }

    #[test]
    fn poly_examples() {
        let y = sin_poly(Dual::variable(0.0), 3).unwrap();
        assert_eq!(y, Dual::new(0.0, 1.0));

        // Taylor remainders: |sin - p7| <= 1/9!, |cos - p7'| <= 1/8!.
        let y = sin_poly(Dual::variable(1.0), 7).unwrap();
        assert!((y.value - 1f64.sin()).abs() < 3e-5);
        assert!((y.tangent - 1f64.cos()).abs() < 3e-4);

        let y = sin_poly(Dual::variable(FRAC_PI_2), 3).unwrap();
        let want = 1.0 - FRAC_PI_2 * FRAC_PI_2 / 2.0;
        assert!((y.tangent - want).abs() < 1e-15);
        assert!((y.tangent + 0.2337).abs() < 1e-4);
    }

    #[test]
    fn poly_rejects_bad_degree_and_domain() {
        assert!(sin_poly(0.5, 4).unwrap_err().is_usage());
        assert!(sin_poly(0.5, 13).is_err());
        assert!(sin_poly(4.0, 5).is_err());
    }
}
