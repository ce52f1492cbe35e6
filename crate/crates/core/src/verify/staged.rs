//! Programs split into stages, each with its own primal, JVP and VJP.

use crate::ad::{forward_jvp, reverse_vjp, Program};
use crate::error::{Error, Result};

/// One differentiable stage `R^n -> R^m`.
pub trait Stage {
    fn name(&self) -> String;
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn jvp(&self, x: &[f64], x_dot: &[f64]) -> Result<Vec<f64>>;
    fn vjp(&self, x: &[f64], y_bar: &[f64]) -> Result<Vec<f64>>;
}

/// A [`Program`] wrapped as a stage, differentiated with the AD engine.
#[derive(Debug, Clone)]
pub struct AdStage<P> {
    name: String,
    program: P,
    input_dim: usize,
    output_dim: usize,
}

impl<P: Program> AdStage<P> {
    pub fn new(name: impl Into<String>, program: P, input_dim: usize, output_dim: usize) -> Self {
        AdStage { name: name.into(), program, input_dim, output_dim }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { what: "stage input", expected: self.input_dim, found: x.len() });
        }
        Ok(())
    }
}

impl<P: Program> Stage for AdStage<P> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn input_dim(&self) -> usize {
        self.input_dim
    }
    fn output_dim(&self) -> usize {
        self.output_dim
    }
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.program.eval(x))
    }
    fn jvp(&self, x: &[f64], x_dot: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(forward_jvp(&self.program, x, x_dot)?.y_dot)
    }
    fn vjp(&self, x: &[f64], y_bar: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(reverse_vjp(&self.program, x, y_bar)?.x_bar)
    }
}

/// Which derivative of a stage a [`Corrupted`] wrapper scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    Jvp,
    Vjp,
}

/// A stage whose JVP or VJP output is multiplied by a factor, for testing
/// that inconsistencies can be located.
pub struct Corrupted<S> {
    pub inner: S,
    pub which: Corruption,
    pub factor: f64,
}

impl<S: Stage> Stage for Corrupted<S> {
    fn name(&self) -> String {
        format!("{}[{:?} x{}]", self.inner.name(), self.which, self.factor)
    }
    fn input_dim(&self) -> usize {
        self.inner.input_dim()
    }
    fn output_dim(&self) -> usize {
        self.inner.output_dim()
    }
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.inner.eval(x)
    }
    fn jvp(&self, x: &[f64], x_dot: &[f64]) -> Result<Vec<f64>> {
        let v = self.inner.jvp(x, x_dot)?;
        Ok(match self.which {
            Corruption::Jvp => v.into_iter().map(|t| t * self.factor).collect(),
            Corruption::Vjp => v,
        })
    }
    fn vjp(&self, x: &[f64], y_bar: &[f64]) -> Result<Vec<f64>> {
        let v = self.inner.vjp(x, y_bar)?;
        Ok(match self.which {
            Corruption::Vjp => v.into_iter().map(|t| t * self.factor).collect(),
            Corruption::Jvp => v,
        })
    }
}

/// Stages composed left to right: `stages[0]` is applied first.
pub struct StagedProgram {
    stages: Vec<Box<dyn Stage>>,
}

impl StagedProgram {
    pub fn new(stages: Vec<Box<dyn Stage>>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::invalid("a staged program needs at least one stage"));
        }
        for w in stages.windows(2) {
            if w[0].output_dim() != w[1].input_dim() {
                return Err(Error::DimensionMismatch {
                    what: "stage interface",
                    expected: w[0].output_dim(),
                    found: w[1].input_dim(),
                });
            }
        }
        Ok(StagedProgram { stages })
    }

    pub fn stages(&self) -> &[Box<dyn Stage>] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Primal values at every interface: `states[0] = x`, `states[k]` is the
    /// output of stage `k - 1`.
    pub fn states(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mut states = vec![x.to_vec()];
        for stage in &self.stages {
            let next = stage.eval(states.last().unwrap())?;
            states.push(next);
        }
        Ok(states)
    }
}

impl Stage for StagedProgram {
    fn name(&self) -> String {
        self.stages.iter().map(|s| s.name()).collect::<Vec<_>>().join(" -> ")
    }
    fn input_dim(&self) -> usize {
        self.stages[0].input_dim()
    }
    fn output_dim(&self) -> usize {
        self.stages[self.stages.len() - 1].output_dim()
    }
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.states(x)?.pop().unwrap())
    }
    fn jvp(&self, x: &[f64], x_dot: &[f64]) -> Result<Vec<f64>> {
        let states = self.states(x)?;
        let mut t = x_dot.to_vec();
        for (stage, s) in self.stages.iter().zip(&states) {
            t = stage.jvp(s, &t)?;
        }
        Ok(t)
    }
    fn vjp(&self, x: &[f64], y_bar: &[f64]) -> Result<Vec<f64>> {
        let states = self.states(x)?;
        let mut a = y_bar.to_vec();
        for (stage, s) in self.stages.iter().zip(&states).rev() {
            a = stage.vjp(s, &a)?;
        }
        Ok(a)
    }
}
