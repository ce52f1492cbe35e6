//! Operators above and below the elementary level: implicit fixed points and
//! linear solves with their own derivative rules, and low-level constructs
//! (lookup tables, truncated series, fast paths, tie-breaking max) whose AD
//! derivatives differ from those of the function they stand for.

mod approx;
mod branch;
mod iterative;
mod linear;

pub use approx::{sin_lut, sin_poly, SineTable, SIN_POLY_DEGREES};
pub use branch::{identity_fastpath, identity_modified, mul_fastpath, vec_max};
pub use iterative::{
    fixed_point_implicit, heron_sqrt_lowlevel, FixedPointMap, FixedPointProblem, FixedPointSolution, HeronMap,
    DEFAULT_MAX_ITERS,
};
pub use linear::{
    linear_solve, linear_solve_dual, linear_solve_jvp, linear_solve_vjp, DenseSystem, LinearSolveAdjoint, LuFactors,
    PIVOT_RTOL,
};
