//! Reverse-mode tape.
//!
//! A [`Tape`] records the elementary operations executed on one evaluation
//! branch, together with their values and local partials. The reverse sweep
//! accumulates adjoints in reverse recording order. A tape therefore
//! differentiates exactly the composition that ran: re-evaluating at inputs
//! that would take another branch is not supported.

use std::cell::{Ref, RefCell};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::ptr;

use super::elementary::{local, DomainViolation, OpKind};
use super::scalar::Scalar;

/// Dense index of a node in recording order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct TapeNode {
    pub op: OpKind,
    pub parents: [Option<NodeId>; 2],
    /// d(value)/d(parent) evaluated at the recorded operand values.
    pub partials: [f64; 2],
    pub value: f64,
}

/// A domain violation raised while recording, tied to the offending node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostic {
    pub node: NodeId,
    pub violation: DomainViolation,
}

#[derive(Debug, Default)]
pub struct Tape {
    nodes: RefCell<Vec<TapeNode>>,
    inputs: RefCell<Vec<NodeId>>,
    outputs: RefCell<Vec<NodeId>>,
    diagnostics: RefCell<Vec<Diagnostic>>,
}

/// A value tracked on a tape, or a constant that lives outside any tape.
#[derive(Debug, Clone, Copy)]
pub struct Var<'t> {
    tape: Option<&'t Tape>,
    id: usize,
    value: f64,
}

/// Per-node adjoint accumulators after a reverse sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjoints {
    values: Vec<f64>,
}

impl Adjoints {
    pub fn get(&self, id: NodeId) -> f64 {
        self.values[id.0]
    }

    /// Adjoint of a variable; constants have adjoint 0.
    pub fn wrt(&self, var: &Var<'_>) -> f64 {
        match var.node() {
            Some(id) => self.get(id),
            None => 0.0,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&self, node: TapeNode, violation: Option<DomainViolation>) -> usize {
        let mut nodes = self.nodes.borrow_mut();
        let id = nodes.len();
        if let Some(violation) = violation {
            self.diagnostics.borrow_mut().push(Diagnostic { node: NodeId(id), violation });
        }
        nodes.push(node);
        id
    }

    /// Register an independent variable.
    pub fn input(&self, value: f64) -> Var<'_> {
        let id = self.push(
            TapeNode { op: OpKind::Input, parents: [None, None], partials: [0.0, 0.0], value },
            None,
        );
        self.inputs.borrow_mut().push(NodeId(id));
        Var { tape: Some(self), id, value }
    }

    fn const_node(&self, value: f64) -> usize {
        self.push(
            TapeNode { op: OpKind::Const, parents: [None, None], partials: [0.0, 0.0], value },
            None,
        )
    }

    /// Mark `var` as an output. Constant outputs get a `Const` node so that
    /// every output has an identifier.
    pub fn mark_output(&self, var: Var<'_>) -> NodeId {
        let id = match var.tape {
            Some(t) => {
                assert!(ptr::eq(t, self), "variable belongs to a different tape");
                var.id
            }
            None => self.const_node(var.value),
        };
        self.outputs.borrow_mut().push(NodeId(id));
        NodeId(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> Ref<'_, Vec<TapeNode>> {
        self.nodes.borrow()
    }

    pub fn input_ids(&self) -> Vec<NodeId> {
        self.inputs.borrow().clone()
    }

    pub fn output_ids(&self) -> Vec<NodeId> {
        self.outputs.borrow().clone()
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        self.diagnostics.borrow().clone()
    }

    /// Recompute every node value from its operation and parents' recomputed
    /// values. Inputs and constants keep their recorded values.
    pub fn replay(&self) -> Vec<f64> {
        let nodes = self.nodes.borrow();
        let mut values: Vec<f64> = Vec::with_capacity(nodes.len());
        for node in nodes.iter() {
            let v = match node.op {
                OpKind::Input | OpKind::Const => node.value,
                op => {
                    let a = values[node.parents[0].expect("missing parent").0];
                    let b = node.parents[1].map_or(0.0, |p| values[p.0]);
                    local(op, a, b).value
                }
            };
            values.push(v);
        }
        values
    }

    /// Reverse sweep. All accumulators start at exactly 0 except the seeds.
    pub fn reverse(&self, seeds: &[(NodeId, f64)]) -> Adjoints {
        let nodes = self.nodes.borrow();
        let mut adj = vec![0.0; nodes.len()];
        for &(id, seed) in seeds {
            adj[id.0] += seed;
        }
        for k in (0..nodes.len()).rev() {
            let a = adj[k];
            if a == 0.0 {
                continue;
            }
            let node = &nodes[k];
            for (parent, partial) in node.parents.iter().zip(node.partials) {
                if let Some(p) = parent {
                    adj[p.0] += partial * a;
                }
            }
        }
        Adjoints { values: adj }
    }

    fn apply<'t>(&'t self, op: OpKind, a: Var<'t>, b: Option<Var<'t>>) -> Var<'t> {
        let bv = b.map_or(0.0, |b| b.value);
        let l = local(op, a.value, bv);
        let node_of = |v: Var<'t>| match v.tape {
            Some(_) => NodeId(v.id),
            None => NodeId(self.const_node(v.value)),
        };
        let pa = node_of(a);
        let pb = b.map(node_of);
        let id = self.push(
            TapeNode { op, parents: [Some(pa), pb], partials: l.partials, value: l.value },
            l.violation,
        );
        Var { tape: Some(self), id, value: l.value }
    }
}

impl<'t> Var<'t> {
    /// A constant outside any tape.
    pub const fn constant(value: f64) -> Self {
        Var { tape: None, id: usize::MAX, value }
    }

    pub fn node(&self) -> Option<NodeId> {
        self.tape.map(|_| NodeId(self.id))
    }

    pub fn tape(&self) -> Option<&'t Tape> {
        self.tape
    }
}

impl<'t> Scalar for Var<'t> {
    fn constant(c: f64) -> Self {
        Var::constant(c)
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn unary(self, op: OpKind) -> Self {
        match self.tape {
            Some(tape) => tape.apply(op, self, None),
            None => Var::constant(local(op, self.value, 0.0).value),
        }
    }

    fn binary(self, op: OpKind, other: Self) -> Self {
        let tape = match (self.tape, other.tape) {
            (Some(a), Some(b)) => {
                assert!(ptr::eq(a, b), "operands belong to different tapes");
                a
            }
            (Some(t), None) | (None, Some(t)) => t,
            (None, None) => return Var::constant(local(op, self.value, other.value).value),
        };
        tape.apply(op, self, Some(other))
    }
}

macro_rules! var_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<'t> $trait for Var<'t> {
            type Output = Var<'t>;
            fn $method(self, rhs: Var<'t>) -> Var<'t> {
                self.binary($op, rhs)
            }
        }
        impl<'t> $trait<f64> for Var<'t> {
            type Output = Var<'t>;
            fn $method(self, rhs: f64) -> Var<'t> {
                self.binary($op, Var::constant(rhs))
            }
        }
        impl<'t> $trait<Var<'t>> for f64 {
            type Output = Var<'t>;
            fn $method(self, rhs: Var<'t>) -> Var<'t> {
                Var::constant(self).binary($op, rhs)
            }
        }
    };
}

var_binop!(Add, add, OpKind::Add);
var_binop!(Sub, sub, OpKind::Sub);
var_binop!(Mul, mul, OpKind::Mul);
var_binop!(Div, div, OpKind::Div);

impl<'t> Neg for Var<'t> {
    type Output = Var<'t>;
    fn neg(self) -> Var<'t> {
        self.unary(OpKind::Neg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parents_precede_children() {
        let tape = Tape::new();
        let x = tape.input(0.3);
        let y = tape.input(1.7);
        let z = (x * y + 2.0).sin() / y.exp() - x.max(y);
        tape.mark_output(z);
        for (k, node) in tape.nodes().iter().enumerate() {
            for p in node.parents.iter().flatten() {
                assert!(p.0 < k);
            }
        }
    }

    #[test]
    fn replay_is_bit_exact() {
        let tape = Tape::new();
        let x = tape.input(0.123456789);
        let z = (x * x).sqrt().ln() + (x / 3.0).cos() * x.powf(2.5);
        tape.mark_output(z);
        let replayed = tape.replay();
        for (node, v) in tape.nodes().iter().zip(&replayed) {
            assert_eq!(node.value.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn product_rule() {
        let tape = Tape::new();
        let x1 = tape.input(2.0);
        let x2 = tape.input(5.0);
        let out = tape.mark_output(x1 * x2);
        let adj = tape.reverse(&[(out, 1.0)]);
        assert_eq!(adj.wrt(&x1), 5.0);
        assert_eq!(adj.wrt(&x2), 2.0);
    }

    #[test]
    fn zero_seed_gives_zero_adjoints() {
        let tape = Tape::new();
        let x = tape.input(0.0);
        let out = tape.mark_output(x.sqrt() + x.abs());
        let adj = tape.reverse(&[(out, 0.0)]);
        assert!(adj.as_slice().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn constant_output_gets_node() {
        let tape = Tape::new();
        let _x = tape.input(1.0);
        let id = tape.mark_output(Var::constant(4.0));
        assert_eq!(tape.nodes()[id.0].op, OpKind::Const);
        assert_eq!(tape.reverse(&[(id, 1.0)]).get(NodeId(0)), 0.0);
    }

    #[test]
    fn violations_recorded_per_node() {
        let tape = Tape::new();
        let x = tape.input(-4.0);
        let y = x.sqrt();
        let d = tape.diagnostics();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].node, y.node().unwrap());
        assert!(y.value().is_nan());
    }

    #[test]
    #[should_panic(expected = "different tapes")]
    fn mixing_tapes_panics() {
        let t1 = Tape::new();
        let t2 = Tape::new();
        let _ = t1.input(1.0) + t2.input(2.0);
    }
}
