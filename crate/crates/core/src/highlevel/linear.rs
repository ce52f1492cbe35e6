//! Dense linear solve with derivative rules at the solve level.
//!
//! Forward: `x_dot = A^{-1} (b_dot - A_dot x)`.
//! Reverse: solve `A^T lambda = x_bar`, then `b_bar = lambda`,
//! `A_bar = -lambda x^T`.

use crate::ad::Dual;
use crate::error::{Error, Result};

/// Relative pivot threshold: pivots below `PIVOT_RTOL * ||A||_inf` are rejected.
pub const PIVOT_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    n: usize,
    /// Row-major `n x n`.
    a: Vec<f64>,
    b: Vec<f64>,
}

impl DenseSystem {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let n = b.len();
        if n == 0 {
            return Err(Error::invalid("linear system must have n >= 1"));
        }
        if a.len() != n * n {
            return Err(Error::DimensionMismatch { what: "matrix entries", expected: n * n, found: a.len() });
        }
        Ok(DenseSystem { n, a, b })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn factor(&self) -> Result<LuFactors> {
        LuFactors::new(&self.a, self.n)
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn new(a: &[f64], n: usize) -> Result<Self> {
        let norm = (0..n)
            .map(|i| a[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let threshold = PIVOT_RTOL * norm;
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pivot > threshold) {
                return Err(Error::Singular { pivot, threshold });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let m = lu[i * n + k] / d;
                lu[i * n + k] = m;
                for j in k + 1..n {
                    lu[i * n + j] -= m * lu[k * n + j];
                }
            }
        }
        Ok(LuFactors { n, lu, perm })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[i * n + j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= self.lu[i * n + j] * y[j];
            }
            y[i] /= self.lu[i * n + i];
        }
        y
    }

    /// Solve `A^T x = c`.
    pub fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let n = self.n;
        // A^T = U^T L^T P, so solve U^T z = c, L^T w = z, x = P^T w.
        let mut z = c.to_vec();
        for i in 0..n {
            for j in 0..i {
                z[i] -= self.lu[j * n + i] * z[j];
            }
            z[i] /= self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                z[i] -= self.lu[j * n + i] * z[j];
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

fn matvec(a: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum()).collect()
}

pub fn linear_solve(system: &DenseSystem) -> Result<Vec<f64>> {
    Ok(system.factor()?.solve(&system.b))
}

/// Forward rule. Returns `(x, x_dot)`.
pub fn linear_solve_jvp(system: &DenseSystem, a_dot: &[f64], b_dot: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = system.n;
    if a_dot.len() != n * n {
        return Err(Error::DimensionMismatch { what: "a_dot", expected: n * n, found: a_dot.len() });
    }
    if b_dot.len() != n {
        return Err(Error::DimensionMismatch { what: "b_dot", expected: n, found: b_dot.len() });
    }
    let lu = system.factor()?;
    let x = lu.solve(&system.b);
    let ax = matvec(a_dot, &x, n);
    let rhs: Vec<f64> = b_dot.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let x_dot = lu.solve(&rhs);
    Ok((x, x_dot))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolveAdjoint {
    pub x: Vec<f64>,
    /// Row-major, same layout as the system matrix.
    pub a_bar: Vec<f64>,
    pub b_bar: Vec<f64>,
}

/// Reverse rule for the solution weighted by `x_bar`.
pub fn linear_solve_vjp(system: &DenseSystem, x_bar: &[f64]) -> Result<LinearSolveAdjoint> {
    let n = system.n;
    if x_bar.len() != n {
        return Err(Error::DimensionMismatch { what: "x_bar", expected: n, found: x_bar.len() });
    }
    let lu = system.factor()?;
    let x = lu.solve(&system.b);
    let lambda = lu.solve_transpose(x_bar);
    let mut a_bar = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a_bar[i * n + j] = -lambda[i] * x[j];
        }
    }
    Ok(LinearSolveAdjoint { x, a_bar, b_bar: lambda })
}

/// Forward-mode linear solve on dual entries, applying the solve-level rule
/// rather than differentiating the factorization loop.
pub fn linear_solve_dual(a: &[Dual], b: &[Dual]) -> Result<Vec<Dual>> {
    let system = DenseSystem::new(a.iter().map(|d| d.value).collect(), b.iter().map(|d| d.value).collect())?;
    let a_dot: Vec<f64> = a.iter().map(|d| d.tangent).collect();
    let b_dot: Vec<f64> = b.iter().map(|d| d.tangent).collect();
    let (x, x_dot) = linear_solve_jvp(&system, &a_dot, &b_dot)?;
    Ok(x.into_iter().zip(x_dot).map(|(v, t)| Dual::new(v, t)).collect())
}
