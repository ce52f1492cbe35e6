use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::elementary::{combine, local, DomainViolation, OpKind};
use super::scalar::Scalar;

/// Value/tangent pair for forward-mode differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub value: f64,
    pub tangent: f64,
}

impl Dual {
    pub const fn new(value: f64, tangent: f64) -> Self {
        Dual { value, tangent }
    }

    /// A constant: tangent exactly zero.
    pub const fn constant(value: f64) -> Self {
        Dual { value, tangent: 0.0 }
    }

    /// An independent variable with unit tangent.
    pub const fn variable(value: f64) -> Self {
        Dual { value, tangent: 1.0 }
    }

    /// Apply an elementary operation and report any domain violation.
    /// `b` is ignored for unary operations.
    pub fn apply_flagged(op: OpKind, a: Dual, b: Dual) -> (Dual, Option<DomainViolation>) {
        let l = local(op, a.value, b.value);
        let tangent = combine(l.partials, [a.tangent, b.tangent], op.arity());
        (Dual::new(l.value, tangent), l.violation)
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.value, self.tangent)
    }
}

impl Scalar for Dual {
    fn constant(c: f64) -> Self {
        Dual::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn unary(self, op: OpKind) -> Self {
        Dual::apply_flagged(op, self, Dual::default()).0
    }
    fn binary(self, op: OpKind, other: Self) -> Self {
        Dual::apply_flagged(op, self, other).0
    }
}

macro_rules! dual_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait for Dual {
            type Output = Dual;
            fn $method(self, rhs: Dual) -> Dual {
                self.binary($op, rhs)
            }
        }
        impl $trait<f64> for Dual {
            type Output = Dual;
            fn $method(self, rhs: f64) -> Dual {
                self.binary($op, Dual::constant(rhs))
            }
        }
        impl $trait<Dual> for f64 {
            type Output = Dual;
            fn $method(self, rhs: Dual) -> Dual {
                Dual::constant(self).binary($op, rhs)
            }
        }
    };
}

dual_binop!(Add, add, OpKind::Add);
dual_binop!(Sub, sub, OpKind::Sub);
dual_binop!(Mul, mul, OpKind::Mul);
dual_binop!(Div, div, OpKind::Div);

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        self.unary(OpKind::Neg)
    }
}
