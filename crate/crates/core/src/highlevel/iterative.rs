//! Fixed-point iterations: differentiated by unrolling the loop, or at the
//! implicit-function level with a separate derivative iteration.

use crate::ad::{Scalar, Tape};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERS: usize = 100;

/// Square root by Heron's iteration `x <- (x + a/x) / 2`, written over the
/// generic scalar so AD flows through exactly the iterations executed.
///
/// The loop stops once `|x*x - a| < tol` on primal values. Returns the final
/// iterate and the number of iterations run.
pub fn heron_sqrt_lowlevel<S: Scalar>(a: S, x0: S, tol: f64, max_iters: usize) -> Result<(S, usize)> {
    if !(a.value() > 0.0 && x0.value() > 0.0 && tol > 0.0) {
        return Err(Error::invalid(format!(
            "heron needs a > 0, x0 > 0, tol > 0 (got a={}, x0={}, tol={})",
            a.value(),
            x0.value(),
            tol
        )));
    }
    let mut x = x0;
    for iters in 0..=max_iters {
        let xv = x.value();
        if (xv * xv - a.value()).abs() < tol {
            return Ok((x, iters));
        }
        if iters == max_iters {
            break;
        }
        x = (x + a / x) * 0.5;
    }
    Err(Error::NonConvergence { what: "heron iteration", iterations: max_iters })
}

/// The update map `phi(x, theta)` of a fixed-point iteration.
pub trait FixedPointMap {
    fn apply<S: Scalar>(&self, state: S, theta: S) -> S;
}

/// Heron's update `(x + a/x)/2` with parameter `a`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeronMap;

impl FixedPointMap for HeronMap {
    fn apply<S: Scalar>(&self, x: S, a: S) -> S {
        (x + a / x) * 0.5
    }
}

#[derive(Debug, Clone)]
pub struct FixedPointProblem<M> {
    pub map: M,
    pub x0: f64,
    pub tol_primal: f64,
    pub tol_deriv: f64,
    pub max_iters: usize,
}

impl<M: FixedPointMap> FixedPointProblem<M> {
    pub fn new(map: M, x0: f64, tol_primal: f64, tol_deriv: f64, max_iters: usize) -> Result<Self> {
        if !(tol_primal > 0.0 && tol_deriv > 0.0) || max_iters == 0 {
            return Err(Error::invalid("fixed-point tolerances must be > 0 and max_iters >= 1"));
        }
        Ok(FixedPointProblem { map, x0, tol_primal, tol_deriv, max_iters })
    }

    /// Partials (dphi/dx, dphi/dtheta) at `(x, theta)`, from one reverse sweep.
    pub fn partials(&self, x: f64, theta: f64) -> (f64, f64) {
        let tape = Tape::new();
        let xv = tape.input(x);
        let tv = tape.input(theta);
        let out = tape.mark_output(self.map.apply(xv, tv));
        let adj = tape.reverse(&[(out, 1.0)]);
        (adj.wrt(&xv), adj.wrt(&tv))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSolution {
    pub x_star: f64,
    pub dx_dtheta: f64,
    pub primal_iters: usize,
    pub deriv_iters: usize,
}

/// Two-phase implicit differentiation of a fixed point.
///
/// Phase one iterates `x <- phi(x, theta)` on plain floats until
/// `|phi(x) - x| < tol_primal`. Phase two iterates `d <- phi_x d + phi_theta`
/// at the converged state until successive iterates differ by less than
/// `tol_deriv`. The result does not depend on how the primal loop started.
pub fn fixed_point_implicit<M: FixedPointMap>(
    problem: &FixedPointProblem<M>,
    theta: f64,
) -> Result<FixedPointSolution> {
    let mut x = problem.x0;
    let mut primal_iters = 0;
    loop {
        let next = problem.map.apply(x, theta);
        if !next.is_finite() {
            return Err(Error::NonConvergence { what: "fixed-point primal", iterations: primal_iters });
        }
        if (next - x).abs() < problem.tol_primal {
            x = next;
            break;
        }
        primal_iters += 1;
        if primal_iters >= problem.max_iters {
            return Err(Error::NonConvergence { what: "fixed-point primal", iterations: primal_iters });
        }
        x = next;
    }

    let (phi_x, phi_theta) = problem.partials(x, theta);
    if !(phi_x.abs() < 1.0) {
        return Err(Error::NotContraction { derivative: phi_x });
    }

    let mut d = 0.0;
    for deriv_iters in 1..=problem.max_iters {
        let next = phi_x * d + phi_theta;
        if (next - d).abs() < problem.tol_deriv {
            return Ok(FixedPointSolution { x_star: x, dx_dtheta: next, primal_iters, deriv_iters });
        }
        d = next;
    }
    Err(Error::NonConvergence { what: "fixed-point derivative", iterations: problem.max_iters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::Dual;

    struct Affine;
    impl FixedPointMap for Affine {
        fn apply<S: Scalar>(&self, x: S, t: S) -> S {
            x * 0.5 + t
        }
    }

    struct Cosine;
    impl FixedPointMap for Cosine {
        fn apply<S: Scalar>(&self, x: S, _t: S) -> S {
            x.cos()
        }
    }

    struct Doubling;
    impl FixedPointMap for Doubling {
        fn apply<S: Scalar>(&self, x: S, t: S) -> S {
            x * 2.0 - t
        }
    }

    #[test]
    fn heron_converges_to_two() {
        let (x, iters) = heron_sqrt_lowlevel(Dual::variable(4.0), Dual::constant(1.0), 1e-6, 100).unwrap();
        assert!((x.value - 2.0).abs() < 1e-6);
        assert!(iters > 0);
        assert!((x.tangent - 0.25).abs() < 1e-3);
    }

    #[test]
    fn heron_exact_guess_runs_zero_iterations() {
        let a = 2.0f64;
        let (x, iters) = heron_sqrt_lowlevel(Dual::variable(a), Dual::constant(a.sqrt()), 1e-6, 100).unwrap();
        assert_eq!(iters, 0);
        assert_eq!(x.tangent, 0.0);
    }

    #[test]
    fn heron_rejects_bad_input_and_reports_nonconvergence() {
        assert!(heron_sqrt_lowlevel(-1.0, 1.0, 1e-6, 10).unwrap_err().is_usage());
        assert!(matches!(
            heron_sqrt_lowlevel(2.0, 1e6, 1e-12, 3),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn affine_fixed_point() {
        let p = FixedPointProblem::new(Affine, 0.0, 1e-12, 1e-12, 200).unwrap();
        let s = fixed_point_implicit(&p, 1.0).unwrap();
        assert!((s.x_star - 2.0).abs() < 1e-11);
        assert!((s.dx_dtheta - 2.0).abs() < 1e-11);
    }

    #[test]
    fn parameter_free_map_has_zero_derivative() {
        let p = FixedPointProblem::new(Cosine, 1.0, 1e-12, 1e-12, 500).unwrap();
        let s = fixed_point_implicit(&p, 3.0).unwrap();
        assert_eq!(s.dx_dtheta, 0.0);
        assert!((s.x_star.cos() - s.x_star).abs() < 1e-11);
    }

    #[test]
    fn heron_map_derivative_independent_of_start() {
        let want = 1.0 / (2.0 * 2f64.sqrt());
        for x0 in [0.5, 1.0, 3.0, 10.0] {
            let p = FixedPointProblem::new(HeronMap, x0, 1e-10, 1e-10, 100).unwrap();
            let s = fixed_point_implicit(&p, 2.0).unwrap();
            assert!((s.dx_dtheta - want).abs() < 1e-10, "x0={x0}");
        }
    }

    #[test]
    fn expanding_map_is_rejected() {
        // Starting exactly at the repelling fixed point x = t.
        let p = FixedPointProblem::new(Doubling, 1.0, 1e-12, 1e-12, 50).unwrap();
        assert!(matches!(fixed_point_implicit(&p, 1.0), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn invalid_problem() {
        assert!(FixedPointProblem::new(HeronMap, 1.0, 0.0, 1e-6, 10).is_err());
        assert!(FixedPointProblem::new(HeronMap, 1.0, 1e-6, 1e-6, 0).is_err());
    }
}
