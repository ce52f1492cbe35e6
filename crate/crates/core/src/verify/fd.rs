//! Finite-difference directional derivatives.

use crate::error::{Error, Result};

fn check(x: &[f64], direction: &[f64], h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("finite-difference step must be positive and finite, got {h}")));
    }
    if direction.len() != x.len() {
        return Err(Error::DimensionMismatch { what: "direction", expected: x.len(), found: direction.len() });
    }
    Ok(())
}

fn shifted(x: &[f64], direction: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(direction).map(|(xi, di)| xi + t * di).collect()
}

/// `(f(x + h d) - f(x)) / h`.
pub fn fd_forward<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], direction: &[f64], h: f64) -> Result<f64> {
    check(x, direction, h)?;
    Ok((f(&shifted(x, direction, h)) - f(x)) / h)
}

/// `(f(x + h d) - f(x - h d)) / (2h)`.
pub fn fd_central<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], direction: &[f64], h: f64) -> Result<f64> {
    check(x, direction, h)?;
    Ok((f(&shifted(x, direction, h)) - f(&shifted(x, direction, -h))) / (2.0 * h))
}

/// Componentwise forward difference of a vector-valued function.
pub fn fd_forward_vec<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], direction: &[f64], h: f64) -> Result<Vec<f64>> {
    check(x, direction, h)?;
    let fp = f(&shifted(x, direction, h));
    let f0 = f(x);
    Ok(fp.iter().zip(&f0).map(|(a, b)| (a - b) / h).collect())
}

/// Componentwise central difference of a vector-valued function.
pub fn fd_central_vec<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], direction: &[f64], h: f64) -> Result<Vec<f64>> {
    check(x, direction, h)?;
    let fp = f(&shifted(x, direction, h));
    let fm = f(&shifted(x, direction, -h));
    Ok(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let sq = |x: &[f64]| x[0] * x[0];
        let fwd = fd_forward(sq, &[1.0], &[1.0], 1e-3).unwrap();
        assert!((fwd - 2.001).abs() < 1e-12);
        let c = fd_central(sq, &[1.0], &[1.0], 1e-3).unwrap();
        assert!((c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exp_central_truncation() {
        // Central error is f'''(0) h^2 / 6 + O(h^4).
        let h = 1e-4;
        let c = fd_central(|x: &[f64]| x[0].exp(), &[0.0], &[1.0], h).unwrap();
        let err = c - 1.0;
        assert!((err - h * h / 6.0).abs() < 2e-11, "err={err}");
    }

    #[test]
    fn constant_function() {
        for h in [1e-1, 1e-5, 1e-9] {
            assert_eq!(fd_central(|_: &[f64]| 3.0, &[0.2, 0.4], &[1.0, -1.0], h).unwrap(), 0.0);
            assert_eq!(fd_forward(|_: &[f64]| 3.0, &[0.2], &[1.0], h).unwrap(), 0.0);
        }
    }

    #[test]
    fn bad_step_and_shape() {
        assert!(fd_central(|x: &[f64]| x[0], &[0.0], &[1.0], 0.0).unwrap_err().is_usage());
        assert!(fd_forward(|x: &[f64]| x[0], &[0.0], &[1.0], -1.0).is_err());
        assert!(fd_central(|x: &[f64]| x[0], &[0.0], &[1.0, 2.0], 0.1).is_err());
    }

    #[test]
    fn vector_outputs() {
        let f = |x: &[f64]| vec![x[0] * x[1], x[0] + x[1]];
        let d = fd_central_vec(f, &[2.0, 3.0], &[1.0, 0.0], 1e-6).unwrap();
        assert!((d[0] - 3.0).abs() < 1e-8 && (d[1] - 1.0).abs() < 1e-8);
        let d = fd_forward_vec(f, &[2.0, 3.0], &[0.0, 1.0], 1e-6).unwrap();
        assert!((d[0] - 2.0).abs() < 1e-6 && (d[1] - 1.0).abs() < 1e-6);
    }
}
