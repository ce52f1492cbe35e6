//! Scalar automatic differentiation: dual numbers for forward mode and a
//! recording tape for reverse mode, sharing one set of elementary rules.

mod dual;
pub mod elementary;
mod modes;
mod scalar;
mod tape;

pub use dual::Dual;
pub use elementary::{DomainViolation, OpKind};
pub use modes::{
    apply_dual_flagged, apply_elementary, evaluate, forward_jvp, gradient, reverse_vjp, JvpResult,
    Program, VjpResult,
};
pub use scalar::Scalar;
pub use tape::{Adjoints, Diagnostic, NodeId, Tape, TapeNode, Var};
