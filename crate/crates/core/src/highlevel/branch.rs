//! Operators whose branches change the derivative at isolated points.

use crate::ad::Scalar;
use crate::error::{Error, Result};

/// Identity with a fast path: at `x == 0` the constant 0 is returned, so AD
/// reports derivative 0 there instead of 1.
pub fn identity_fastpath<S: Scalar>(x: S) -> S {
    if x.value() == 0.0 {
        S::constant(0.0)
    } else {
        x
    }
}

/// Identity whose special branch computes `sin(x)` at `x == 0`. Same values
/// as [`identity_fastpath`], but the branch derivative `cos(0) = 1` agrees
/// with the other branch.
pub fn identity_modified<S: Scalar>(x: S) -> S {
    if x.value() == 0.0 {
        x.sin()
    } else {
        x
    }
}

/// Multiplication with the fast paths found in BLAS-style kernels:
/// `y == 1` returns `x` (no dependence on `y`), `y == 0` returns constant 0
/// (no dependence on `x`).
pub fn mul_fastpath<S: Scalar>(x: S, y: S) -> S {
    let yv = y.value();
    if yv == 1.0 {
        x
    } else if yv == 0.0 {
        S::constant(0.0)
    } else {
        x * y
    }
}

/// Maximum of a non-empty slice. On ties the derivative goes to the first
/// index attaining the maximum.
pub fn vec_max<S: Scalar>(values: &[S]) -> Result<S> {
    let (first, rest) = values.split_first().ok_or_else(|| Error::invalid("vec_max of an empty vector"))?;
    Ok(rest.iter().fold(*first, |acc, &v| acc.max(v)))
}
