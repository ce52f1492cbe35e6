//! Derivative verification: finite differences, multi-step gradcheck, the
//! dot-product test with split-point localization, and an FD-based check of
//! reverse mode.

mod dot;
mod fd;
mod fdvjp;
mod gradcheck;
mod staged;

pub use dot::{dot_product_test, DotProductReport, DEFAULT_SPREAD_TOL};
pub use fd::{fd_central, fd_central_vec, fd_forward, fd_forward_vec};
pub use fdvjp::{fd_vjp_check, random_unit_vector, FdVjpReport, CAVEAT};
pub use gradcheck::{
    default_h_grid, gradcheck, log_spaced, GradCheckReport, Verdict, MIN_CENTRAL_SLOPE, MIN_REGIME_POINTS,
    PLATEAU_FACTOR,
};
pub use staged::{AdStage, Corrupted, Corruption, Stage, StagedProgram};
