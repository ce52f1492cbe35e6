//! Built-in functions: a smooth corpus, seeded random compositions, and the
//! pitfall operators, each expressible as a chain of stages.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ad::{Program, Scalar};
use crate::highlevel::{identity_fastpath, identity_modified, mul_fastpath, sin_lut, sin_poly, vec_max, SineTable};
use crate::verify::{AdStage, Stage, StagedProgram};

/// A building block with fixed input and output dimensions.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Sin,
    Exp,
    Square,
    /// `(1 - x0, x1 - x0^2)`
    RosenbrockResidual,
    /// `r0^2 + 100 r1^2`
    RosenbrockSum,
    /// `sin(x0) cos(x1) + x0^2`
    TrigProduct,
    /// `log(1 + x0^2 + x1^2 + x2^2)`
    LogSumSquares,
    /// `x / (1 + x^2)`
    Rational,
    /// `log(1 + exp(x))`
    Softplus,
    FastpathG,
    FastpathH,
    /// `mul_fastpath(x0, x1)`
    MulFastpath,
    /// `vec_max([1, x])`
    VecMaxTie,
    SinLut(SineTable),
    SinPoly(u32),
    /// `log(exp(x) - 1)` evaluated naively.
    LogExpm1,
}

impl Piece {
    pub fn input_dim(&self) -> usize {
        match self {
            Piece::RosenbrockResidual | Piece::RosenbrockSum | Piece::TrigProduct | Piece::MulFastpath => 2,
            Piece::LogSumSquares => 3,
            _ => 1,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Piece::RosenbrockResidual => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Piece::SinLut(t) => format!("sin_lut{}", t.resolution()),
            Piece::SinPoly(d) => format!("sin_poly{d}"),
            other => format!("{other:?}").to_lowercase(),
        }
    }
}

impl Program for Piece {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        match self {
            Piece::Sin => vec![x[0].sin()],
            Piece::Exp => vec![x[0].exp()],
            Piece::Square => vec![x[0] * x[0]],
            Piece::RosenbrockResidual => vec![S::constant(1.0) - x[0], x[1] - x[0] * x[0]],
            Piece::RosenbrockSum => vec![x[0] * x[0] + x[1] * x[1] * 100.0],
            Piece::TrigProduct => vec![x[0].sin() * x[1].cos() + x[0] * x[0]],
            Piece::LogSumSquares => vec![(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + 1.0).ln()],
            Piece::Rational => vec![x[0] / (x[0] * x[0] + 1.0)],
            Piece::Softplus => vec![(x[0].exp() + 1.0).ln()],
            Piece::FastpathG => vec![identity_fastpath(x[0])],
            Piece::FastpathH => vec![identity_modified(x[0])],
            Piece::MulFastpath => vec![mul_fastpath(x[0], x[1])],
            Piece::VecMaxTie => vec![vec_max(&[S::constant(1.0), x[0]]).expect("non-empty")],
            Piece::SinLut(table) => vec![sin_lut(x[0], table)],
            Piece::SinPoly(d) => vec![sin_poly(x[0], *d).unwrap_or(S::constant(f64::NAN))],
            Piece::LogExpm1 => vec![(x[0].exp() - 1.0).ln()],
        }
    }
}

/// Pieces applied left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain(pub Vec<Piece>);

impl Program for Chain {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        self.0.iter().fold(x.to_vec(), |v, p| p.eval(&v))
    }
}

impl Chain {
    pub fn input_dim(&self) -> usize {
        self.0[0].input_dim()
    }

    pub fn staged(&self) -> StagedProgram {
        let stages: Vec<Box<dyn Stage>> = self
            .0
            .iter()
            .map(|p| Box::new(AdStage::new(p.name(), p.clone(), p.input_dim(), p.output_dim())) as Box<dyn Stage>)
            .collect();
        StagedProgram::new(stages).expect("built-in chains have matching dimensions")
    }
}

/// A named built-in function with the points it is checked at.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub id: &'static str,
    pub smooth: bool,
    pub chain: Chain,
    pub points: Vec<Vec<f64>>,
}

pub const BUILTIN_IDS: [&str; 13] = [
    "exp_sin",
    "rosenbrock",
    "trig_product",
    "log_sum_squares",
    "rational",
    "softplus",
    "fastpath_g",
    "fastpath_h",
    "mul_fastpath",
    "vec_max_tie",
    "sin_lut",
    "sin_poly",
    "log_expm1",
];

pub const SINE_TABLE_SIZE: usize = 4096;

pub fn builtin(id: &str) -> Option<Builtin> {
    use Piece::*;
    let (smooth, pieces, points): (bool, Vec<Piece>, Vec<Vec<f64>>) = match id {
        "exp_sin" => (true, vec![Sin, Exp], vec![vec![0.7], vec![0.3], vec![-1.2]]),
        "rosenbrock" => (true, vec![RosenbrockResidual, RosenbrockSum], vec![vec![-1.2, 1.0], vec![0.5, 0.3]]),
        "trig_product" => (true, vec![TrigProduct], vec![vec![0.4, -0.9], vec![1.3, 0.2]]),
        "log_sum_squares" => (true, vec![LogSumSquares], vec![vec![0.3, -0.5, 0.8], vec![1.1, 0.2, -0.4]]),
        "rational" => (true, vec![Rational], vec![vec![0.5], vec![-2.0]]),
        "softplus" => (true, vec![Square, Softplus], vec![vec![0.8], vec![-0.6]]),
        "fastpath_g" => (false, vec![FastpathG], vec![vec![0.0], vec![1.5]]),
        "fastpath_h" => (false, vec![FastpathH], vec![vec![0.0], vec![1.5]]),
        "mul_fastpath" => (false, vec![MulFastpath], vec![vec![3.0, 1.0], vec![3.0, 0.0], vec![3.0, 2.0]]),
        "vec_max_tie" => (false, vec![VecMaxTie], vec![vec![1.0], vec![2.0]]),
        "sin_lut" => (
            false,
            vec![SinLut(SineTable::new(SINE_TABLE_SIZE).expect("positive size"))],
            vec![vec![1.0], vec![2.5]],
        ),
        "sin_poly" => (false, vec![SinPoly(7)], vec![vec![1.0], vec![-2.5]]),
        "log_expm1" => (false, vec![LogExpm1], vec![vec![1.0], vec![0.5]]),
        _ => return None,
    };
    let id = BUILTIN_IDS.iter().find(|b| **b == id).copied()?;
    Some(Builtin { id, smooth, chain: Chain(pieces), points })
}

/// All smooth built-ins.
pub fn smooth_corpus() -> Vec<Builtin> {
    BUILTIN_IDS.iter().filter_map(|id| builtin(id)).filter(|b| b.smooth).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Sin,
    Cos,
    /// `z / sqrt(1 + z^2)`
    SoftSign,
    /// `log(1 + exp(z))`
    Softplus,
    /// `exp(-z^2 / 2)`
    Gaussian,
    /// `z^2 / 2`
    HalfSquare,
}

const ACTIVATIONS: [Activation; 6] = [
    Activation::Sin,
    Activation::Cos,
    Activation::SoftSign,
    Activation::Softplus,
    Activation::Gaussian,
    Activation::HalfSquare,
];

impl Activation {
    fn apply<S: Scalar>(self, z: S) -> S {
        match self {
            Activation::Sin => z.sin(),
            Activation::Cos => z.cos(),
            Activation::SoftSign => z / (z * z + 1.0).sqrt(),
            Activation::Softplus => (z.exp() + 1.0).ln(),
            Activation::Gaussian => (z * z * -0.5).exp(),
            Activation::HalfSquare => z * z * 0.5,
        }
    }
}

/// `y_i = act_i(sum_j W_ij x_j + b_i)`, optionally multiplied by a second
/// affine form to exercise products.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomLayer {
    pub input_dim: usize,
    pub output_dim: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
    gate: Option<Vec<f64>>,
    activations: Vec<Activation>,
}

impl RandomLayer {
    pub fn generate(rng: &mut ChaCha8Rng, input_dim: usize, output_dim: usize) -> Self {
        let scale = 1.0 / (input_dim as f64).sqrt();
        let weights = (0..input_dim * output_dim).map(|_| rng.gen_range(-1.0..1.0) * scale).collect();
        let bias = (0..output_dim).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let gate = rng
            .gen_bool(0.3)
            .then(|| (0..input_dim).map(|_| rng.gen_range(-1.0..1.0) * scale).collect());
        let activations = (0..output_dim).map(|_| ACTIVATIONS[rng.gen_range(0..ACTIVATIONS.len())]).collect();
        RandomLayer { input_dim, output_dim, weights, bias, gate, activations }
    }
}

impl Program for RandomLayer {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let gate = self.gate.as_ref().map(|g| {
            x.iter().zip(g).fold(S::constant(1.0), |acc, (&xi, &gi)| acc + xi * gi)
        });
        (0..self.output_dim)
            .map(|i| {
                let row = &self.weights[i * self.input_dim..(i + 1) * self.input_dim];
                let z = x.iter().zip(row).fold(S::constant(self.bias[i]), |acc, (&xi, &w)| acc + xi * w);
                let y = self.activations[i].apply(z);
                match gate {
                    Some(g) => y * g,
                    None => y,
                }
            })
            .collect()
    }
}

/// A seeded random composition of [`RandomLayer`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomProgram {
    pub layers: Vec<RandomLayer>,
}

impl RandomProgram {
    /// Depth in `1..=max_depth`, every interface dimension in `1..=max_dim`.
    pub fn generate(seed: u64, max_depth: usize, max_dim: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = rng.gen_range(1..=max_depth);
        Self::with_depth(&mut rng, depth, max_dim)
    }

    pub fn with_depth(rng: &mut ChaCha8Rng, depth: usize, max_dim: usize) -> Self {
        let dims: Vec<usize> = (0..=depth).map(|_| rng.gen_range(1..=max_dim)).collect();
        let layers = dims.windows(2).map(|w| RandomLayer::generate(rng, w[0], w[1])).collect();
        RandomProgram { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].output_dim
    }

    pub fn staged(&self) -> StagedProgram {
        let stages: Vec<Box<dyn Stage>> = self
            .layers
            .iter()
            .enumerate()
            .map(|(k, l)| {
                Box::new(AdStage::new(format!("layer{k}"), l.clone(), l.input_dim, l.output_dim)) as Box<dyn Stage>
            })
            .collect();
        StagedProgram::new(stages).expect("layers chain by construction")
    }
}

impl Program for RandomProgram {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        self.layers.iter().fold(x.to_vec(), |v, l| l.eval(&v))
    }
}

/// Seeded vector with entries uniform in `[lo, hi)`.
pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Default `x` grid for a function in the pointwise study.
pub fn pointwise_default_grid(id: &str) -> Option<Vec<f64>> {
    Some(match id {
        "fastpath_g" | "fastpath_h" => vec![-1.0, -0.5, 0.0, 0.5, 1.0],
        "mul_fastpath" => vec![-1.0, 0.0, 0.5, 1.0, 2.0],
        "vec_max_tie" => vec![0.5, 1.0, 1.5],
        "sin_lut" => vec![0.0, 0.5, 1.0, PI / 2.0, 2.0, 3.0],
        "sin_poly" => vec![-3.0, -PI / 2.0, -1.0, 0.0, 1.0, PI / 2.0, 3.0],
        "log_expm1" => vec![1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, 10.0],
        _ => return None,
    })
}
