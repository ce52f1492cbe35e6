//! The verification suite run against a built-in function at each of its
//! check points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ad::forward_jvp;
use crate::ad::Program;
use crate::corpus::{builtin, random_vector, BUILTIN_IDS};
use crate::error::{Error, Result};
use crate::verify::{
    default_h_grid, dot_product_test, fd_vjp_check, gradcheck, random_unit_vector, Verdict, DEFAULT_SPREAD_TOL,
};

/// Step size of the FD-vs-VJP projection check.
pub const FD_VJP_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub verdict: Verdict,
    /// The full `CHECK <name>: <VERDICT> — <metric>=<value>` line.
    pub line: String,
}

fn point_label(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:?}")).collect();
    format!("[{}]", parts.join(","))
}

/// Gradcheck, dot-product test and FD-vs-VJP check at every check point of
/// the built-in `id`. All random vectors derive from `seed`.
pub fn verify_builtin(id: &str, seed: u64) -> Result<Vec<CheckOutcome>> {
    let b = builtin(id).ok_or_else(|| {
        Error::InvalidArgument(format!("unknown function '{id}' (known: {})", BUILTIN_IDS.join(", ")))
    })?;
    let staged = b.chain.staged();
    let mut out = Vec::new();
    for (k, x) in b.points.iter().enumerate() {
        let point_seed = seed.wrapping_add(k as u64);
        let at = format!("{id}{}", point_label(x));

        let direction = random_unit_vector(x.len(), point_seed);
        let ad = forward_jvp(&b.chain, x, &direction)?.y_dot[0];
        let f = |p: &[f64]| b.chain.eval(p)[0];
        let g = gradcheck(f, ad, x, &direction, &default_h_grid())?;
        let name = format!("{at}/gradcheck");
        out.push(CheckOutcome { line: g.summary_line(&name), name, verdict: g.verdict });

        let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
        let x_dot = random_vector(&mut rng, x.len(), -1.0, 1.0);
        let y_bar = random_vector(&mut rng, 1, 0.5, 1.5);
        let d = dot_product_test(&staged, x, &x_dot, &y_bar)?;
        let name = format!("{at}/dot_product");
        let verdict = if d.is_consistent(DEFAULT_SPREAD_TOL) { Verdict::Pass } else { Verdict::Suspect };
        out.push(CheckOutcome { line: d.summary_line(&name, DEFAULT_SPREAD_TOL), name, verdict });

        let v = fd_vjp_check(&staged, x, &y_bar, FD_VJP_STEP, point_seed)?;
        let name = format!("{at}/fd_vjp");
        out.push(CheckOutcome { line: v.summary_line(&name), name, verdict: v.verdict });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_function_passes_everything() {
        let checks = verify_builtin("exp_sin", 0).unwrap();
        assert_eq!(checks.len(), 9);
        assert!(checks.iter().all(|c| c.verdict == Verdict::Pass), "{checks:#?}");
    }

    #[test]
    fn fastpath_g_names_the_origin() {
        let checks = verify_builtin("fastpath_g", 0).unwrap();
        let bad: Vec<_> = checks.iter().filter(|c| c.verdict == Verdict::Suspect).collect();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|c| c.name.starts_with("fastpath_g[0.0]")));
    }

    #[test]
    fn unknown_id_is_usage_error() {
        assert!(verify_builtin("tanh", 0).unwrap_err().is_usage());
    }

    #[test]
    fn reports_are_seed_deterministic() {
        assert_eq!(verify_builtin("rosenbrock", 9).unwrap(), verify_builtin("rosenbrock", 9).unwrap());
    }
}
