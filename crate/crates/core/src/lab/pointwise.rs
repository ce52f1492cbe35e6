//! Pointwise comparison of AD derivatives of the pitfall operators against
//! the derivative of the function they are meant to implement.

use super::overrides::*;
use super::{float, CsvRecord};
use crate::ad::{Dual, Scalar};
use crate::corpus::{pointwise_default_grid, SINE_TABLE_SIZE};
use crate::error::{Error, Result};
use crate::highlevel::{
    identity_fastpath, identity_modified, mul_fastpath, sin_lut, sin_poly, vec_max, SineTable, SIN_POLY_DEGREES,
};

pub const POINTWISE_IDS: [&str; 7] =
    ["fastpath_g", "fastpath_h", "mul_fastpath", "vec_max_tie", "sin_lut", "sin_poly", "log_expm1"];

/// Relative AD error above which a row is flagged as a discrepancy.
pub const REL_ERR_THRESHOLD: f64 = 1e-8;

/// Fixed first factor of `mul_fastpath`; the study differentiates in the
/// second factor.
const MUL_X: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseConfig {
    /// A single function id, or `all`.
    pub function: String,
    /// Overrides every function's default grid when set.
    pub x_grid: Option<Vec<f64>>,
    pub fd_h: f64,
    pub degree: u32,
    pub table_size: usize,
}

impl Default for PointwiseConfig {
    fn default() -> Self {
        PointwiseConfig {
            function: "all".to_string(),
            x_grid: None,
            fd_h: 1e-5,
            degree: 7,
            table_size: SINE_TABLE_SIZE,
        }
    }
}

impl Configurable for PointwiseConfig {
    const KEYS: &'static [&'static str] = &["fn", "x_grid", "fd_h", "degree", "table_size"];

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "fn" => self.function = v.to_string(),
            "x_grid" => self.x_grid = Some(parse_f64_list(key, v)?),
            "fd_h" => self.fd_h = parse_f64(key, v)?,
            "degree" => self.degree = parse_usize(key, v)? as u32,
            "table_size" => self.table_size = parse_usize(key, v)?,
            _ => return Err(unknown_key("pointwise", key, Self::KEYS)),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.function != "all" && !POINTWISE_IDS.contains(&self.function.as_str()) {
            return Err(Error::invalid(format!(
                "pointwise: unknown function '{}' (use all or one of {})",
                self.function,
                POINTWISE_IDS.join(", ")
            )));
        }
        if !(self.fd_h > 0.0 && self.fd_h.is_finite()) {
            return Err(Error::invalid("pointwise: fd_h must be positive"));
        }
        if !SIN_POLY_DEGREES.contains(&self.degree) {
            return Err(Error::invalid("pointwise: degree must be one of 3, 5, 7, 9, 11"));
        }
        if self.table_size == 0 {
            return Err(Error::invalid("pointwise: table_size must be positive"));
        }
        if let Some(g) = &self.x_grid {
            if g.is_empty() || g.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("pointwise: x_grid must be non-empty and finite"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFlag {
    Ok,
    Discrepancy,
    Domain,
}

impl PointFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::Discrepancy => "discrepancy",
            PointFlag::Domain => "domain",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseRecord {
    pub function: &'static str,
    pub x: f64,
    pub primal: f64,
    pub ad_deriv: f64,
    pub ref_deriv: f64,
    pub fd_deriv: f64,
    pub rel_err_ad: f64,
    pub flag: PointFlag,
}

impl CsvRecord for PointwiseRecord {
    const HEADER: &'static [&'static str] =
        &["fn", "x", "primal", "ad_deriv", "ref_deriv", "fd_deriv", "rel_err_ad", "flag"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            float(self.x),
            float(self.primal),
            float(self.ad_deriv),
            float(self.ref_deriv),
            float(self.fd_deriv),
            float(self.rel_err_ad),
            self.flag.as_str().to_string(),
        ]
    }
}

struct Study<'a> {
    id: &'static str,
    degree: u32,
    table: &'a SineTable,
}

impl Study<'_> {
    /// The operator as implemented. Errors mark points outside its domain.
    fn eval<S: Scalar>(&self, x: S) -> Result<S> {
        Ok(match self.id {
            "fastpath_g" => identity_fastpath(x),
            "fastpath_h" => identity_modified(x),
            "mul_fastpath" => mul_fastpath(S::constant(MUL_X), x),
            "vec_max_tie" => vec_max(&[S::constant(1.0), x])?,
            "sin_lut" => sin_lut(x, self.table),
            "sin_poly" => sin_poly(x, self.degree)?,
            "log_expm1" => {
                if !(x.value() > 0.0) {
                    return Err(Error::invalid(format!("log_expm1 needs x > 0, got {}", x.value())));
                }
                (x.exp() - 1.0).ln()
            }
            other => unreachable!("unknown pointwise id {other}"),
        })
    }

    /// Derivative of the function the operator stands for. At the tie of
    /// `max(1, x)` this is the symmetric subgradient 1/2.
    fn reference(&self, x: f64) -> f64 {
        match self.id {
            "fastpath_g" | "fastpath_h" => 1.0,
            "mul_fastpath" => MUL_X,
            "vec_max_tie" => {
                if x > 1.0 {
                    1.0
                } else if x < 1.0 {
                    0.0
                } else {
                    0.5
                }
            }
            "sin_lut" | "sin_poly" => x.cos(),
            "log_expm1" => x.exp() / x.exp_m1(),
            other => unreachable!("unknown pointwise id {other}"),
        }
    }

    fn fd_step(&self, x: f64, h: f64) -> f64 {
        if self.id == "log_expm1" {
            h.min(0.5 * x)
        } else {
            h
        }
    }

    fn row(&self, x: f64, fd_h: f64) -> PointwiseRecord {
        let reference = self.reference(x);
        match self.eval(Dual::variable(x)) {
            Err(_) => PointwiseRecord {
                function: self.id,
                x,
                primal: f64::NAN,
                ad_deriv: f64::NAN,
                ref_deriv: if self.id == "log_expm1" { f64::NAN } else { reference },
                fd_deriv: f64::NAN,
                rel_err_ad: f64::NAN,
                flag: PointFlag::Domain,
            },
            Ok(y) => {
                let h = self.fd_step(x, fd_h);
                let fd = match (self.eval(x + h), self.eval(x - h)) {
                    (Ok(p), Ok(m)) => (p - m) / (2.0 * h),
                    _ => f64::NAN,
                };
                let diff = (y.tangent - reference).abs();
                let rel = if reference != 0.0 { diff / reference.abs() } else { diff };
                let flag = if rel <= REL_ERR_THRESHOLD { PointFlag::Ok } else { PointFlag::Discrepancy };
                PointwiseRecord {
                    function: self.id,
                    x,
                    primal: y.value,
                    ad_deriv: y.tangent,
                    ref_deriv: reference,
                    fd_deriv: fd,
                    rel_err_ad: rel,
                    flag,
                }
            }
        }
    }
}

pub fn run_pointwise(cfg: &PointwiseConfig) -> Result<Vec<PointwiseRecord>> {
    cfg.validate()?;
    let table = SineTable::new(cfg.table_size)?;
    let ids: Vec<&'static str> = POINTWISE_IDS.iter().copied().filter(|id| cfg.function == "all" || cfg.function == *id).collect();
    let mut out = Vec::new();
    for id in ids {
        let study = Study { id, degree: cfg.degree, table: &table };
        let grid = match &cfg.x_grid {
            Some(g) => g.clone(),
            None => pointwise_default_grid(id).expect("every pointwise id has a default grid"),
        };
        out.extend(grid.into_iter().map(|x| study.row(x, cfg.fd_h)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(id: &str, xs: &str) -> Vec<PointwiseRecord> {
        let cfg = PointwiseConfig::from_overrides(&[("fn".into(), id.into()), ("x_grid".into(), xs.into())]).unwrap();
        run_pointwise(&cfg).unwrap()
    }

    #[test]
    fn fastpath_g_discrepancy_at_zero() {
        let r = single("fastpath_g", "0,0.5");
        assert_eq!((r[0].ad_deriv, r[0].ref_deriv, r[0].flag), (0.0, 1.0, PointFlag::Discrepancy));
        assert_eq!(r[1].flag, PointFlag::Ok);
    }

    #[test]
    fn fastpath_h_is_fine_at_zero() {
        let r = single("fastpath_h", "0");
        assert_eq!((r[0].ad_deriv, r[0].flag), (1.0, PointFlag::Ok));
    }

    #[test]
    fn log_expm1_domain_is_flagged() {
        let r = single("log_expm1", "-1,0,1");
        assert_eq!(r[0].flag, PointFlag::Domain);
        assert_eq!(r[1].flag, PointFlag::Domain);
        assert_eq!(r[2].flag, PointFlag::Ok);
    }

    #[test]
    fn lookup_table_has_zero_derivative() {
        let r = single("sin_lut", "0.3,1.1");
        assert!(r.iter().all(|r| r.ad_deriv == 0.0 && r.flag == PointFlag::Discrepancy));
        assert!((r[1].fd_deriv - 0.0).abs() < 1e-12 || r[1].fd_deriv.abs() > 1.0);
    }

    #[test]
    fn max_tie_takes_first_operand() {
        let r = single("vec_max_tie", "1");
        assert_eq!((r[0].ad_deriv, r[0].ref_deriv), (0.0, 0.5));
    }

    #[test]
    fn unknown_function_is_a_usage_error() {
        assert!(PointwiseConfig::from_overrides(&[("fn".into(), "tan".into())]).unwrap_err().is_usage());
    }
}
