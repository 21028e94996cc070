//! Monte Carlo studies of the confidence intervals, numerical checks of the
//! asymptotic constants, and CSV estimation reports.
//!
//! Replication `r` of a cell draws its sample from stream
//! [`stream_id`]`(cell, r)`, and per-cell aggregation runs in replication
//! order, so every number is independent of the thread count.

mod config;
mod estimate;
mod report;
mod verify;

pub use config::{Settings, SettingsError};
pub use estimate::{
    estimate_cmd, estimate_sample, read_csv_sample, EstimateOptions, EstimateReport, PearsonSummary,
};
pub use report::{format_sig6, render_table, write_csv, TableMetric, CSV_HEADER};
pub use verify::{
    verify_asymptotics, verify_asymptotics_with, AsymptoticsReport, Check, VerifyOptions,
};

use rayon::prelude::*;

use crate::correlation::{confidence_interval, sscor_two_stage, CiMethod};
use crate::elliptical::{sample, EllipticalSpec, Family, SeedSpec};
use crate::location::LocationMethod;
use crate::pearson::{ci_pearson, kurtosis_mv, pearson_corr};
use crate::scale::ScaleMethod;
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// The four interval constructions compared in the coverage study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimEstimator {
    Sscor,
    SscorH,
    Cor,
    CorZ,
}

impl SimEstimator {
    pub const ALL: [SimEstimator; 4] = [Self::Sscor, Self::SscorH, Self::Cor, Self::CorZ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sscor => "sscor",
            Self::SscorH => "sscor_h",
            Self::Cor => "cor",
            Self::CorZ => "cor_z",
        }
    }
}

impl std::str::FromStr for SimEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s || e.name().replace('_', "-") == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown estimator '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    pub rhos: Vec<f64>,
    pub ns: Vec<usize>,
    pub reps: usize,
    pub level: f64,
    pub estimators: Vec<SimEstimator>,
    pub master_seed: u64,
    /// `None` uses rayon's default.
    pub threads: Option<usize>,
    pub scale: ScaleMethod,
    pub location: LocationMethod,
}

impl Default for ExperimentConfig {
    /// The full grid: normal, t₅ and t₃; ρ ∈ {0, 0.5}; six sample sizes;
    /// 10,000 replications of 95% intervals with Qn scales and the spatial
    /// median.
    fn default() -> Self {
        Self {
            families: vec![
                Family::Normal,
                Family::Student { nu: 5.0 },
                Family::Student { nu: 3.0 },
            ],
            rhos: vec![0.0, 0.5],
            ns: vec![10, 20, 50, 100, 500, 10_000],
            reps: 10_000,
            level: 0.95,
            estimators: SimEstimator::ALL.to_vec(),
            master_seed: 20_150_101,
            threads: None,
            scale: ScaleMethod::qn(),
            location: LocationMethod::SpatialMedian,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidInput("reps must be at least 1".into()));
        }
        if self.families.is_empty() || self.rhos.is_empty() || self.ns.is_empty() {
            return Err(Error::InvalidInput("empty experiment grid".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidInput("no estimators selected".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 10) {
            return Err(Error::InvalidInput(format!("sample sizes must be >= 10, got {n}")));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Domain { what: "level", value: self.level });
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidInput("threads must be at least 1".into()));
        }
        for &rho in &self.rhos {
            EllipticalSpec::standard(Family::Normal, rho).validate()?;
        }
        Ok(())
    }

    fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &family in &self.families {
            for &rho in &self.rhos {
                for &n in &self.ns {
                    cells.push(Cell { family, rho, n });
                }
            }
        }
        cells
    }
}

/// One `(distribution, ρ, n)` combination of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub family: Family,
    pub rho: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub distribution: String,
    pub rho: f64,
    pub n: usize,
    pub estimator: SimEstimator,
    pub coverage_pct: f64,
    /// Binomial Monte Carlo standard error of `coverage_pct`.
    pub monte_carlo_se: f64,
    /// Mean of [`ConfInterval::nominal_length`](crate::correlation::ConfInterval::nominal_length)
    /// times `√n`, so plain intervals are not shortened by clamping at `±1`.
    pub avg_length_times_sqrt_n: f64,
    pub reps: usize,
    pub reps_used: usize,
    pub failures: usize,
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn cell_key(cell: &Cell) -> u64 {
    let family = match cell.family {
        Family::Normal => 0,
        Family::Student { nu } => nu.to_bits(),
    };
    mix64(mix64(mix64(family) ^ cell.rho.to_bits()) ^ cell.n as u64)
}

/// Random stream of replication `rep` in `cell`; depends on nothing else.
pub fn stream_id(cell: &Cell, rep: u64) -> u64 {
    mix64(cell_key(cell) ^ mix64(rep))
}

/// Interval outcome of one estimator in one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Outcome {
    covered: bool,
    length: f64,
}

fn replicate(
    config: &ExperimentConfig,
    cell: &Cell,
    rep: u64,
) -> Result<[Option<Outcome>; 4]> {
    let spec = EllipticalSpec::standard(cell.family, cell.rho);
    let data = sample(&spec, cell.n, SeedSpec::new(config.master_seed, stream_id(cell, rep)))?;
    let mut out = [None; 4];
    let outcome = |ci: crate::correlation::ConfInterval| Outcome {
        covered: ci.contains(cell.rho),
        length: ci.nominal_length,
    };

    let wants = |e: SimEstimator| config.estimators.contains(&e);
    if wants(SimEstimator::Sscor) || wants(SimEstimator::SscorH) {
        if let Ok(est) = sscor_two_stage(&data, config.scale, &config.location) {
            for (idx, e, method) in [
                (0, SimEstimator::Sscor, CiMethod::Plain),
                (1, SimEstimator::SscorH, CiMethod::HTransform),
            ] {
                if wants(e) {
                    out[idx] = confidence_interval(&est, config.level, method).ok().map(outcome);
                }
            }
        }
    }
    if wants(SimEstimator::Cor) || wants(SimEstimator::CorZ) {
        if let (Ok(r), Ok(k)) = (pearson_corr(&data), kurtosis_mv(&data)) {
            for (idx, e, method) in [
                (2, SimEstimator::Cor, CiMethod::Plain),
                (3, SimEstimator::CorZ, CiMethod::ZTransform),
            ] {
                if wants(e) {
                    out[idx] = ci_pearson(r, k.kappa_hat, cell.n, config.level, method)
                        .ok()
                        .map(outcome);
                }
            }
        }
    }
    Ok(out)
}

fn estimator_slot(e: SimEstimator) -> usize {
    match e {
        SimEstimator::Sscor => 0,
        SimEstimator::SscorH => 1,
        SimEstimator::Cor => 2,
        SimEstimator::CorZ => 3,
    }
}

fn aggregate(
    config: &ExperimentConfig,
    cell: &Cell,
    results: &[[Option<Outcome>; 4]],
) -> Vec<ExperimentRow> {
    let reps = results.len();
    config
        .estimators
        .iter()
        .map(|&e| {
            let slot = estimator_slot(e);
            let mut covered = 0usize;
            let mut used = 0usize;
            let mut length = CompensatedSum::new();
            for outcome in results.iter().filter_map(|r| r[slot]) {
                used += 1;
                covered += usize::from(outcome.covered);
                length.add(outcome.length);
            }
            let (coverage, se, avg_len) = if used == 0 {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                let p = covered as f64 / used as f64;
                (
                    100.0 * p,
                    100.0 * (p * (1.0 - p) / used as f64).sqrt(),
                    length.value() / used as f64 * (cell.n as f64).sqrt(),
                )
            };
            ExperimentRow {
                distribution: cell.family.name(),
                rho: cell.rho,
                n: cell.n,
                estimator: e,
                coverage_pct: coverage,
                monte_carlo_se: se,
                avg_length_times_sqrt_n: avg_len,
                reps,
                reps_used: used,
                failures: reps - used,
            }
        })
        .collect()
}

pub(crate) fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build thread pool: {e}")))
}

/// Runs every cell of the grid and returns one row per
/// `(distribution, ρ, n, estimator)`, carrying both coverage and length.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let pool = thread_pool(config.threads)?;
    let mut rows = Vec::new();
    for cell in config.cells() {
        let results: Vec<[Option<Outcome>; 4]> = pool.install(|| {
            (0..config.reps as u64)
                .into_par_iter()
                .map(|r| replicate(config, &cell, r))
                .collect::<Result<Vec<_>>>()
        })?;
        rows.extend(aggregate(config, &cell, &results));
    }
    Ok(rows)
}

/// Empirical coverage probabilities of the intervals.
pub fn run_coverage(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    run_experiment(config)
}

/// Average interval lengths times `√n`. Rows are the same as for
/// [`run_coverage`]; only the rendered table differs.
pub fn run_length(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    run_experiment(config)
}
