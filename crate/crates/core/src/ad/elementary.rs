//! The elementary operation set and its local derivative rules.
//!
//! Both the dual-number type and the tape evaluate operations through
//! [`local`], so forward and reverse mode share one set of derivative rules.
//!
//! Choices at non-differentiable points:
//! - `abs` at 0 has derivative 0.
//! - `min`/`max` with equal operands route the derivative to the first operand.
//! - `powf(x, p)` at `x = 0` has partial 0 when `p > 1` and NaN (flagged) otherwise.
//! - `sqrt` at 0 is treated as `powf(x, 0.5)`: NaN partial, flagged.

use std::fmt;

/// One operation of the elementary set. Comparisons are not listed: they
/// act on primal values only and never carry derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpKind {
    Input,
    Const,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    /// Power with a constant real exponent.
    Powf(f64),
    Abs,
    Min,
    Max,
}

impl OpKind {
    pub fn arity(self) -> usize {
        match self {
            OpKind::Input | OpKind::Const => 0,
            OpKind::Add | OpKind::Sub | OpKind::Mul | OpKind::Div | OpKind::Min | OpKind::Max => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Input => "input",
            OpKind::Const => "const",
            OpKind::Add => "add",
            OpKind::Sub => "sub",
            OpKind::Mul => "mul",
            OpKind::Div => "div",
            OpKind::Neg => "neg",
            OpKind::Sin => "sin",
            OpKind::Cos => "cos",
            OpKind::Exp => "exp",
            OpKind::Log => "log",
            OpKind::Sqrt => "sqrt",
            OpKind::Powf(_) => "pow",
            OpKind::Abs => "abs",
            OpKind::Min => "min",
            OpKind::Max => "max",
        }
    }
}

/// An operand outside the real domain (or at a non-differentiable point
/// whose partial is NaN by convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainViolation {
    pub op: OpKind,
    pub operands: [f64; 2],
}

impl fmt::Display for DomainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op.arity() {
            2 => write!(f, "{}({}, {}) outside domain", self.op.name(), self.operands[0], self.operands[1]),
            _ => match self.op {
                OpKind::Powf(p) => write!(f, "pow({}, {}) outside domain", self.operands[0], p),
                op => write!(f, "{}({}) outside domain", op.name(), self.operands[0]),
            },
        }
    }
}

/// Value and local partials of one elementary operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local {
    pub value: f64,
    pub partials: [f64; 2],
    pub violation: Option<DomainViolation>,
}

impl Local {
    fn ok(value: f64, d0: f64, d1: f64) -> Self {
        Local { value, partials: [d0, d1], violation: None }
    }
}

/// Evaluate `op` at operand values `a` (and `b` for binary operations).
/// `b` is ignored for unary operations.
pub fn local(op: OpKind, a: f64, b: f64) -> Local {
    let flag = |value: f64, d0: f64, d1: f64| Local {
        value,
        partials: [d0, d1],
        violation: Some(DomainViolation { op, operands: [a, b] }),
    };
    match op {
        OpKind::Input | OpKind::Const => Local::ok(a, 0.0, 0.0),
        OpKind::Add => Local::ok(a + b, 1.0, 1.0),
        OpKind::Sub => Local::ok(a - b, 1.0, -1.0),
        OpKind::Mul => Local::ok(a * b, b, a),
        OpKind::Div => {
            let value = a / b;
            if b == 0.0 {
                flag(value, f64::NAN, f64::NAN)
            } else {
                Local::ok(value, 1.0 / b, -value / b)
            }
        }
        OpKind::Neg => Local::ok(-a, -1.0, 0.0),
        OpKind::Sin => Local::ok(a.sin(), a.cos(), 0.0),
        OpKind::Cos => Local::ok(a.cos(), -a.sin(), 0.0),
        OpKind::Exp => {
            let e = a.exp();
            Local::ok(e, e, 0.0)
        }
        OpKind::Log => {
            if a > 0.0 {
                Local::ok(a.ln(), 1.0 / a, 0.0)
            } else {
                flag(a.ln(), f64::NAN, 0.0)
            }
        }
        OpKind::Sqrt => {
            let s = a.sqrt();
            if a > 0.0 {
                Local::ok(s, 0.5 / s, 0.0)
            } else {
                flag(s, f64::NAN, 0.0)
            }
        }
        OpKind::Powf(p) => {
            let value = a.powf(p);
            if a == 0.0 {
                if p > 1.0 {
                    Local::ok(value, 0.0, 0.0)
                } else {
                    flag(value, f64::NAN, 0.0)
                }
            } else if value.is_nan() && !a.is_nan() {
                flag(value, f64::NAN, 0.0)
            } else {
                Local::ok(value, p * a.powf(p - 1.0), 0.0)
            }
        }
        OpKind::Abs => {
            let d = if a > 0.0 {
                1.0
            } else if a < 0.0 {
                -1.0
            } else {
                0.0
            };
            Local::ok(a.abs(), d, 0.0)
        }
        OpKind::Min => {
            if a <= b {
                Local::ok(a, 1.0, 0.0)
            } else {
                Local::ok(b, 0.0, 1.0)
            }
        }
        OpKind::Max => {
            if a >= b {
                Local::ok(a, 1.0, 0.0)
            } else {
                Local::ok(b, 0.0, 1.0)
            }
        }
    }
}

/// Linear combination of partials and incoming derivatives that skips zero
/// derivatives, so a zero seed never turns into NaN through an infinite or
/// NaN partial.
#[inline]
pub(crate) fn combine(partials: [f64; 2], d: [f64; 2], arity: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..arity {
        if d[i] != 0.0 {
            acc += partials[i] * d[i];
        }
    }
    acc
}
