//! Seeded Monte Carlo harness for the qubit, Werner and invariant sweeps.
//!
//! Every random sample `i` draws from its own stream `RngStream::new(seed, i)`,
//! so records are a pure function of the configuration whatever the thread
//! count. Records are collected in index order before any aggregation.

mod format;
mod output;
mod qubit;
mod verify;
mod werner;

pub use format::{fmt_sig, SIG_DIGITS};
pub use output::{write_sweep, WrittenFiles};
pub use qubit::{run_fig1, run_mu_fit, Fig1Record, MuRecord, MU_HISTOGRAM_RANGE};
pub use verify::run_verify;
pub use werner::{
    fig3_alphas, run_fig2, run_fig3, run_fig4, Fig2Record, Fig3Kind, Fig3Record, Fig4Record,
    FIG3_NUMERIC_ALPHA_MIN,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::BellSign;

/// Worker cap read from the environment.
pub const THREADS_ENV: &str = "IRREALITY_LAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    MuFit,
    Verify,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Fig1,
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4,
        ExperimentId::MuFit,
        ExperimentId::Verify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Fig1 => "fig1",
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4 => "fig4",
            ExperimentId::MuFit => "mu_fit",
            ExperimentId::Verify => "verify",
        }
    }

    /// Desk-scale sample count. Meaning per experiment: random configurations
    /// (fig1, mu_fit, fig4), random alpha curves (fig3), random triples per
    /// dimension (verify). fig2 is a fixed grid and ignores it.
    pub fn default_samples(self) -> usize {
        match self {
            ExperimentId::Fig1 => 200_000,
            ExperimentId::MuFit => 100_000,
            ExperimentId::Fig2 => 181 * 11,
            ExperimentId::Fig3 => 100,
            ExperimentId::Fig4 => 10_000,
            ExperimentId::Verify => 10_000,
        }
    }

    pub fn paper_samples(self) -> usize {
        match self {
            ExperimentId::Fig1 => 2_000_000,
            ExperimentId::MuFit => 1_000_000,
            ExperimentId::Fig2 => 181 * 11,
            ExperimentId::Fig3 => 1_000,
            ExperimentId::Fig4 => 100_000,
            ExperimentId::Verify => 10_000,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown experiment '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub samples: usize,
    pub seed: u64,
    pub werner_sign: BellSign,
    /// Worker count; `None` uses all cores. The environment cap applies either way.
    pub threads: Option<usize>,
    /// theta grid on `[0, pi]` for fig2 and fig3.
    pub theta_points: usize,
    /// alpha rows of fig2.
    pub alphas: Vec<f64>,
    /// fig4 runs the one-sided discord optimizer on every k-th sample.
    pub spot_check_every: usize,
    pub histogram_bins: usize,
    /// Overrides the closed-form vs matrix agreement tolerance.
    pub tolerance: Option<f64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId, seed: u64) -> Self {
        Self {
            experiment,
            samples: experiment.default_samples(),
            seed,
            werner_sign: BellSign::default(),
            threads: None,
            theta_points: 181,
            alphas: (0..=10).map(|k| k as f64 / 10.0).collect(),
            spot_check_every: 100,
            histogram_bins: 60,
            tolerance: None,
            out_dir: PathBuf::from("results"),
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.samples == 0 {
            return bad("sample count must be positive".into());
        }
        if self.theta_points < 2 {
            return bad(format!(
                "theta grid needs at least 2 points, got {}",
                self.theta_points
            ));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return bad("alpha set must be nonempty and inside [0, 1]".into());
        }
        if self.spot_check_every == 0 || self.histogram_bins == 0 {
            return bad("spot-check stride and histogram bins must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("thread count must be positive".into());
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("tolerance {t} must be positive"));
            }
        }
        Ok(())
    }

    /// Closed-form vs matrix agreement tolerance.
    pub fn agreement_tol(&self) -> f64 {
        self.tolerance.unwrap_or(match self.experiment {
            ExperimentId::Fig1 => 1e-9,
            ExperimentId::Fig2 | ExperimentId::Fig3 => 1e-8,
            ExperimentId::Fig4 => 1e-8,
            ExperimentId::MuFit | ExperimentId::Verify => 1e-9,
        })
    }

    /// Every tolerance the run applies, for the manifest.
    pub fn tolerances(&self) -> BTreeMap<String, f64> {
        let mut t = BTreeMap::new();
        t.insert("agreement".to_string(), self.agreement_tol());
        let extra: &[(&str, f64)] = match self.experiment {
            ExperimentId::Fig1 => &[("sandwich", 1e-9)],
            ExperimentId::MuFit => &[("mu_min_exclusive", 0.7), ("mu_max_slack", 1e-9)],
            ExperimentId::Fig2 => &[
                ("alpha0_row", 1e-10),
                ("max_bits", 2.0 + 1e-12),
                ("monotone_slack", 1e-12),
            ],
            ExperimentId::Fig3 => &[("per_info_floor", 0.5 - 1e-6), ("half_pi_column", 1e-8)],
            ExperimentId::Fig4 => &[
                ("discord_sandwich", 1e-9),
                ("delta_pct_floor", DELTA_PCT_FLOOR),
                ("delta_pct_ceiling", DELTA_PCT_CEILING),
                ("ji_exclusion", DELTA_JI_FLOOR),
                ("spot_check", SPOT_CHECK_TOL),
                ("equality_cases", 1e-9),
            ],
            ExperimentId::Verify => &[
                ("identity", 1e-10),
                ("bounds", 1e-9),
                ("nonnegativity", 1e-10),
                ("faithfulness_ji", 1e-9),
                ("faithfulness_state", 1e-6),
                ("classical", 1e-12),
            ],
        };
        for (k, v) in extra {
            t.insert(k.to_string(), *v);
        }
        t
    }

    /// Worker count after applying the environment cap.
    pub fn resolved_threads(&self) -> usize {
        let base = self
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let cap = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0);
        cap.map_or(base, |c| base.min(c)).max(1)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.resolved_threads())
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
    }
}

pub const DELTA_PCT_FLOOR: f64 = -1e-7;
pub const DELTA_PCT_CEILING: f64 = 5.0;
/// Samples with JI at or below this are left out of the Delta% statistics.
pub const DELTA_JI_FLOOR: f64 = 1e-9;
pub const SPOT_CHECK_TOL: f64 = 1e-6;

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// A row of an experiment's CSV. Random samples carry their index; the
/// stream that produced them is `RngStream::new(config.seed, index)`.
pub trait SweepRecord: Send + Sync {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

/// Pass/fail outcome of one acceptance threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub samples: u64,
    pub detail: String,
}

impl Check {
    pub fn new(
        name: &str,
        passed: bool,
        worst: f64,
        tolerance: f64,
        samples: u64,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            name: name.to_string(),
            passed,
            worst,
            tolerance,
            samples,
            detail: detail.into(),
        }
    }

    /// Passes when `worst <= tolerance`.
    pub fn at_most(name: &str, worst: f64, tolerance: f64, samples: u64) -> Self {
        Self::new(
            name,
            worst <= tolerance,
            worst,
            tolerance,
            samples,
            format!("max {} <= {}", fmt_sig(worst), fmt_sig(tolerance)),
        )
    }
}

impl SweepRecord for Check {
    fn header() -> &'static [&'static str] {
        &["name", "passed", "worst", "tolerance", "samples", "detail"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.name.clone()),
            self.passed.into(),
            self.worst.into(),
            self.tolerance.into(),
            self.samples.into(),
            Cell::Text(self.detail.clone()),
        ]
    }
}

/// Auxiliary table written next to the main CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtraTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Axis and series hints for an external plotting tool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub kind: String,
    pub x: String,
    pub y: Vec<String>,
    pub group_by: Option<String>,
    pub x_label: String,
    pub y_label: String,
    pub notes: Vec<String>,
}

/// Completed run: records in index order plus aggregate results.
#[derive(Clone, Debug)]
pub struct Sweep<R> {
    pub config: ExperimentConfig,
    pub records: Vec<R>,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub extras: Vec<ExtraTable>,
    pub plot: PlotSpec,
    pub started_at: String,
    pub duration_s: f64,
    pub threads: usize,
}

impl<R> Sweep<R> {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Aggregates and checks computed from records.
pub(crate) struct Analysis {
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub extras: Vec<ExtraTable>,
    pub plot: PlotSpec,
}

/// Validates the config, runs `body` on a dedicated pool and stamps timing.
pub(crate) fn execute<R>(
    cfg: &ExperimentConfig,
    expected: ExperimentId,
    body: impl FnOnce(&ExperimentConfig) -> Result<(Vec<R>, Analysis)> + Send,
) -> Result<Sweep<R>>
where
    R: Send,
{
    if cfg.experiment != expected {
        return Err(Error::InvalidConfig(format!(
            "config is for {}, runner is {expected}",
            cfg.experiment
        )));
    }
    cfg.validate()?;
    let pool = cfg.pool()?;
    let started_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
    let clock = Instant::now();
    let (records, analysis) = pool.install(|| body(cfg))?;
    Ok(Sweep {
        config: cfg.clone(),
        records,
        summary: analysis.summary,
        checks: analysis.checks,
        extras: analysis.extras,
        plot: analysis.plot,
        started_at,
        duration_s: clock.elapsed().as_secs_f64(),
        threads: pool.current_num_threads(),
    })
}

/// Evaluates `f` on every index in parallel, results in index order.
pub(crate) fn par_indexed<T, F>(range: Range<u64>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

/// `n` evenly spaced points on `[0, pi]`, endpoints included.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| j as f64 * std::f64::consts::PI / (n - 1) as f64)
        .collect()
}

pub(crate) fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn min_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

/// Type-erased result of [`run_and_write`].
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub experiment: ExperimentId,
    pub files: WrittenFiles,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub rows: usize,
    pub duration_s: f64,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn finish<R: SweepRecord>(sweep: Sweep<R>, dir: &Path) -> Result<RunOutcome> {
    let files = write_sweep(&sweep, dir)?;
    Ok(RunOutcome {
        experiment: sweep.config.experiment,
        files,
        rows: sweep.records.len(),
        summary: sweep.summary,
        checks: sweep.checks,
        duration_s: sweep.duration_s,
    })
}

/// Runs the configured experiment and writes its CSV, manifest and plot
/// description into `cfg.out_dir`.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let dir = cfg.out_dir.as_path();
    match cfg.experiment {
        ExperimentId::Fig1 => finish(run_fig1(cfg)?, dir),
        ExperimentId::MuFit => finish(run_mu_fit(cfg)?, dir),
        ExperimentId::Fig2 => finish(run_fig2(cfg)?, dir),
        ExperimentId::Fig3 => finish(run_fig3(cfg)?, dir),
        ExperimentId::Fig4 => finish(run_fig4(cfg)?, dir),
        ExperimentId::Verify => finish(run_verify(cfg)?, dir),
    }
}
