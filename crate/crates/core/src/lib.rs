//! Forward- and reverse-mode automatic differentiation with a derivative
//! verification toolkit and deterministic experiments that reproduce common
//! ways AD results mislead.
//!
//! - [`ad`]: dual numbers, the recording tape, JVP/VJP drivers.
//! - [`highlevel`]: implicit fixed points, linear solves, and pitfall-prone
//!   low-level operators.
//! - [`verify`]: finite differences, multi-step gradcheck, dot-product test.
//! - [`lab`]: experiment runners that emit CSV records.
//! - [`suite`]: the verification suite over the built-in functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ad;
pub mod corpus;
mod error;
pub mod highlevel;
pub mod lab;
pub mod suite;
pub mod verify;

pub use ad::{forward_jvp, gradient, reverse_vjp, Dual, Program, Scalar, Tape, Var};
pub use error::{Error, Result};
