//! Deterministic experiment runners that write per-sample CSV records.

mod cosine;
mod heron;
mod lorenz;
mod overrides;
mod pointwise;
mod quadrature;

use std::io::Write;

pub use cosine::{run_cosine, sinc_average, CosineConfig, CosineRecord};
pub use heron::{run_heron, HeronConfig, HeronRecord};
pub use lorenz::{run_lorenz, time_average_z, LorenzConfig, LorenzRecord, BLOW_UP_LIMIT};
pub use overrides::{parse_assignment, Configurable};
pub use pointwise::{run_pointwise, PointFlag, PointwiseConfig, PointwiseRecord, POINTWISE_IDS, REL_ERR_THRESHOLD};
pub use quadrature::{run_quadrature, staircase, QuadratureConfig, QuadratureRecord, JUMP_TOL};

use crate::error::{Error, Result};

/// A row of an experiment's CSV output.
pub trait CsvRecord {
    const HEADER: &'static [&'static str];

    fn fields(&self) -> Vec<String>;
}

/// Write a header row followed by one row per record. Floats use the
/// shortest representation that round-trips.
pub fn write_csv<R: CsvRecord, W: Write>(records: &[R], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER).map_err(io_error)?;
    for r in records {
        w.write_record(r.fields()).map_err(io_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn io_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn float(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Lorenz,
    Cosine,
    Quadrature,
    Heron,
    Pointwise,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Lorenz, Experiment::Cosine, Experiment::Quadrature, Experiment::Heron, Experiment::Pointwise];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::Lorenz => "lorenz",
            Experiment::Cosine => "cosine",
            Experiment::Quadrature => "quadrature",
            Experiment::Heron => "heron",
            Experiment::Pointwise => "pointwise",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.id() == id)
    }

    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::Lorenz => LorenzConfig::KEYS,
            Experiment::Cosine => CosineConfig::KEYS,
            Experiment::Quadrature => QuadratureConfig::KEYS,
            Experiment::Heron => HeronConfig::KEYS,
            Experiment::Pointwise => PointwiseConfig::KEYS,
        }
    }
}

/// A fully validated experiment, ready to run.
#[derive(Debug, Clone)]
pub enum Plan {
    Lorenz(LorenzConfig),
    Cosine(CosineConfig),
    Quadrature(QuadratureConfig),
    Heron(HeronConfig),
    Pointwise(PointwiseConfig),
}

impl Plan {
    /// Parse and validate every override before anything runs.
    pub fn new(experiment: Experiment, overrides: &[(String, String)]) -> Result<Plan> {
        Ok(match experiment {
            Experiment::Lorenz => Plan::Lorenz(LorenzConfig::from_overrides(overrides)?),
            Experiment::Cosine => Plan::Cosine(CosineConfig::from_overrides(overrides)?),
            Experiment::Quadrature => Plan::Quadrature(QuadratureConfig::from_overrides(overrides)?),
            Experiment::Heron => Plan::Heron(HeronConfig::from_overrides(overrides)?),
            Experiment::Pointwise => Plan::Pointwise(PointwiseConfig::from_overrides(overrides)?),
        })
    }

    /// Run the experiment and write its CSV to `out`.
    pub fn run<W: Write>(&self, out: W) -> Result<usize> {
        match self {
            Plan::Lorenz(c) => emit(&run_lorenz(c)?, out),
            Plan::Cosine(c) => emit(&run_cosine(c)?, out),
            Plan::Quadrature(c) => emit(&run_quadrature(c)?, out),
            Plan::Heron(c) => emit(&run_heron(c)?, out),
            Plan::Pointwise(c) => emit(&run_pointwise(c)?, out),
        }
    }
}

fn emit<R: CsvRecord, W: Write>(records: &[R], out: W) -> Result<usize> {
    write_csv(records, out)?;
    Ok(records.len())
}
