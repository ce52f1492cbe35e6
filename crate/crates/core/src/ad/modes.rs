//! Forward (JVP) and reverse (VJP) drivers over [`Program`]s.

use super::dual::Dual;
use super::elementary::{DomainViolation, OpKind};
use super::scalar::Scalar;
use super::tape::{Diagnostic, Tape};
use crate::error::{Error, Result};

/// A pure function over the elementary operation set, generic over the
/// scalar type so it can be run in either differentiation mode.
pub trait Program {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S>;
}

impl<P: Program + ?Sized> Program for &P {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        (**self).eval(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JvpResult {
    pub y: Vec<f64>,
    pub y_dot: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VjpResult {
    pub y: Vec<f64>,
    pub x_bar: Vec<f64>,
    /// Domain violations hit while recording the tape.
    pub diagnostics: Vec<Diagnostic>,
}

/// Apply one elementary operation to one or two operands of any scalar type.
pub fn apply_elementary<S: Scalar>(op: OpKind, operands: &[S]) -> Result<S> {
    if matches!(op, OpKind::Input | OpKind::Const) {
        return Err(Error::invalid(format!("{} is not an applicable operation", op.name())));
    }
    if operands.len() != op.arity() {
        return Err(Error::DimensionMismatch {
            what: "operands",
            expected: op.arity(),
            found: operands.len(),
        });
    }
    Ok(match operands {
        [a] => a.unary(op),
        [a, b] => a.binary(op, *b),
        _ => unreachable!(),
    })
}

/// Forward-mode elementary application that also reports domain violations.
pub fn apply_dual_flagged(op: OpKind, operands: &[Dual]) -> Result<(Dual, Option<DomainViolation>)> {
    apply_elementary(op, operands)?;
    let b = operands.get(1).copied().unwrap_or_default();
    Ok(Dual::apply_flagged(op, operands[0], b))
}

pub fn forward_jvp<P: Program + ?Sized>(program: &P, x: &[f64], x_dot: &[f64]) -> Result<JvpResult> {
    if x_dot.len() != x.len() {
        return Err(Error::DimensionMismatch { what: "x_dot", expected: x.len(), found: x_dot.len() });
    }
    let xs: Vec<Dual> = x.iter().zip(x_dot).map(|(&v, &t)| Dual::new(v, t)).collect();
    let ys = program.eval(&xs);
    Ok(JvpResult {
        y: ys.iter().map(|d| d.value).collect(),
        y_dot: ys.iter().map(|d| d.tangent).collect(),
    })
}

pub fn reverse_vjp<P: Program + ?Sized>(program: &P, x: &[f64], y_bar: &[f64]) -> Result<VjpResult> {
    let tape = Tape::new();
    let xs: Vec<_> = x.iter().map(|&v| tape.input(v)).collect();
    let ys = program.eval(&xs);
    if y_bar.len() != ys.len() {
        return Err(Error::DimensionMismatch { what: "y_bar", expected: ys.len(), found: y_bar.len() });
    }
    let seeds: Vec<_> = ys
        .iter()
        .zip(y_bar)
        .map(|(&y, &w)| (tape.mark_output(y), w))
        .collect();
    let adj = tape.reverse(&seeds);
    Ok(VjpResult {
        y: ys.iter().map(Scalar::value).collect(),
        x_bar: xs.iter().map(|v| adj.wrt(v)).collect(),
        diagnostics: tape.diagnostics(),
    })
}

/// Gradient of a scalar-output program (reverse mode with `y_bar = 1`).
pub fn gradient<P: Program + ?Sized>(program: &P, x: &[f64]) -> Result<Vec<f64>> {
    let tape = Tape::new();
    let xs: Vec<_> = x.iter().map(|&v| tape.input(v)).collect();
    let ys = program.eval(&xs);
    if ys.len() != 1 {
        return Err(Error::NonScalarOutput(ys.len()));
    }
    let out = tape.mark_output(ys[0]);
    let adj = tape.reverse(&[(out, 1.0)]);
    Ok(xs.iter().map(|v| adj.wrt(v)).collect())
}

/// Evaluate a program on plain floats.
pub fn evaluate<P: Program + ?Sized>(program: &P, x: &[f64]) -> Vec<f64> {
    program.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct SinPlusSquare;
    impl Program for SinPlusSquare {
        fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
            vec![x[0].sin() + x[0] * x[0]]
        }
    }

    struct Product;
    impl Program for Product {
        fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
            vec![x[0] * x[1]]
        }
    }

    struct Unary(OpKind);
    impl Program for Unary {
        fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
            vec![x[0].unary(self.0)]
        }
    }

    #[test]
    fn jvp_of_sin_plus_square() {
        let r = forward_jvp(&SinPlusSquare, &[0.0], &[1.0]).unwrap();
        assert_eq!(r.y, vec![0.0]);
        assert_eq!(r.y_dot, vec![1.0]);
    }

    #[test]
    fn vjp_examples() {
        let r = reverse_vjp(&Product, &[2.0, 5.0], &[1.0]).unwrap();
        assert_eq!(r.x_bar, vec![5.0, 2.0]);
        assert_eq!(r.y, vec![10.0]);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(gradient(&Unary(OpKind::Log), &[2.0]).unwrap(), vec![0.5]);
        assert_eq!(gradient(&Unary(OpKind::Exp), &[0.0]).unwrap(), vec![1.0]);
        assert_eq!(gradient(&Unary(OpKind::Abs), &[-3.0]).unwrap(), vec![-1.0]);
        assert_eq!(gradient(&Unary(OpKind::Abs), &[0.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            forward_jvp(&Product, &[1.0, 2.0], &[1.0]),
            Err(Error::DimensionMismatch { what: "x_dot", .. })
        ));
        assert!(matches!(
            reverse_vjp(&Product, &[1.0, 2.0], &[1.0, 1.0]),
            Err(Error::DimensionMismatch { what: "y_bar", .. })
        ));
        struct Two;
        impl Program for Two {
            fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
                vec![x[0], x[0]]
            }
        }
        assert_eq!(gradient(&Two, &[1.0]), Err(Error::NonScalarOutput(2)));
    }

    #[test]
    fn apply_elementary_checks_arity() {
        assert!(apply_elementary(OpKind::Add, &[1.0f64]).is_err());
        assert!(apply_elementary(OpKind::Input, &[1.0f64]).is_err());
        assert_eq!(apply_elementary(OpKind::Mul, &[3.0f64, 3.0]).unwrap(), 9.0);
        let (d, v) = apply_dual_flagged(OpKind::Sqrt, &[Dual::variable(-1.0)]).unwrap();
        assert!(d.value.is_nan());
        assert!(v.is_some());
    }

    #[test]
    fn reverse_reports_diagnostics() {
        let r = reverse_vjp(&Unary(OpKind::Log), &[-1.0], &[1.0]).unwrap();
        assert_eq!(r.diagnostics.len(), 1);
        assert!(r.x_bar[0].is_nan());
    }
}
