use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::elementary::OpKind;

/// A real number type that programs are written against, so the same code
/// runs on plain `f64`, on [`Dual`](super::Dual) numbers (forward mode) and
/// on tape variables [`Var`](super::Var) (reverse mode).
///
/// Branches in generic code should compare [`Scalar::value`]s; comparisons
/// never carry derivatives.
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Lift a constant. Its derivative is exactly zero.
    fn constant(c: f64) -> Self;

    /// Primal value.
    fn value(&self) -> f64;

    fn unary(self, op: OpKind) -> Self;

    fn binary(self, op: OpKind, other: Self) -> Self;

    fn sin(self) -> Self {
        self.unary(OpKind::Sin)
    }
    fn cos(self) -> Self {
        self.unary(OpKind::Cos)
    }
    fn exp(self) -> Self {
        self.unary(OpKind::Exp)
    }
    fn ln(self) -> Self {
        self.unary(OpKind::Log)
    }
    fn sqrt(self) -> Self {
        self.unary(OpKind::Sqrt)
    }
    fn powf(self, p: f64) -> Self {
        self.unary(OpKind::Powf(p))
    }
    fn abs(self) -> Self {
        self.unary(OpKind::Abs)
    }
    /// Minimum; on ties the derivative follows `self`.
    fn min(self, other: Self) -> Self {
        self.binary(OpKind::Min, other)
    }
    /// Maximum; on ties the derivative follows `self`.
    fn max(self, other: Self) -> Self {
        self.binary(OpKind::Max, other)
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn unary(self, op: OpKind) -> Self {
        super::elementary::local(op, self, 0.0).value
    }
    fn binary(self, op: OpKind, other: Self) -> Self {
        super::elementary::local(op, self, other).value
    }
}
