//! Single-qubit sweeps: irreality bounds and the fitted exponent `mu`.

use std::collections::BTreeMap;

use super::{
    execute, max_of, min_of, par_indexed, Analysis, Cell, Check, ExperimentConfig, ExperimentId,
    ExtraTable, PlotSpec, Sweep, SweepRecord,
};
use crate::closedform::{
    mu_exponent, qubit_information, qubit_irreality, qubit_irreality_bounds, QubitConfig,
};
use crate::error::{Error, Result};
use crate::measures::irreality;
use crate::qstate::{embed_config, random_qubit_config, RngStream};

const SANDWICH_TOL: f64 = 1e-9;
/// Histogram support for `mu`.
pub const MU_HISTOGRAM_RANGE: (f64, f64) = (0.7, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Record {
    pub index: u64,
    pub r: f64,
    pub lambda: f64,
    pub info: f64,
    pub irreality_closed: f64,
    pub irreality_numeric: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl Fig1Record {
    pub fn numeric_diff(&self) -> f64 {
        (self.irreality_closed - self.irreality_numeric).abs()
    }

    /// `upper - irreality`; negative when the upper bound is broken.
    pub fn upper_gap(&self) -> f64 {
        self.upper_bound - self.irreality_closed
    }

    pub fn lower_excess(&self) -> f64 {
        self.lower_bound - self.irreality_closed
    }

    pub fn in_sandwich(&self) -> bool {
        self.lower_excess() <= SANDWICH_TOL && self.upper_gap() >= -SANDWICH_TOL
    }
}

impl SweepRecord for Fig1Record {
    fn header() -> &'static [&'static str] {
        &[
            "index",
            "r",
            "lambda",
            "info",
            "irreality_closed",
            "irreality_numeric",
            "lower_bound",
            "upper_bound",
            "upper_gap",
            "in_sandwich",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.index.into(),
            self.r.into(),
            self.lambda.into(),
            self.info.into(),
            self.irreality_closed.into(),
            self.irreality_numeric.into(),
            self.lower_bound.into(),
            self.upper_bound.into(),
            self.upper_gap().into(),
            self.in_sandwich().into(),
        ]
    }
}

fn fig1_sample(seed: u64, index: u64) -> Result<Fig1Record> {
    let mut rng = RngStream::new(seed, index).rng();
    let (r, lambda) = random_qubit_config(&mut rng);
    let c = QubitConfig::new(r, lambda)?;
    let embedded = embed_config(r, lambda, &mut rng)?;
    let (lower_bound, upper_bound) = qubit_irreality_bounds(c);
    Ok(Fig1Record {
        index,
        r,
        lambda,
        info: qubit_information(r),
        irreality_closed: qubit_irreality(c),
        irreality_numeric: irreality(&embedded.state, &embedded.observable)?,
        lower_bound,
        upper_bound,
    })
}

/// Uniform `(r, lambda)` samples: closed-form irreality, its empirical
/// bounds, and the matrix value on a random embedding of the same pair.
pub fn run_fig1(cfg: &ExperimentConfig) -> Result<Sweep<Fig1Record>> {
    execute(cfg, ExperimentId::Fig1, |cfg| {
        let records = par_indexed(0..cfg.samples as u64, |i| fig1_sample(cfg.seed, i))?;
        let analysis = analyze_fig1(cfg, &records);
        Ok((records, analysis))
    })
}

fn analyze_fig1(cfg: &ExperimentConfig, records: &[Fig1Record]) -> Analysis {
    let n = records.len() as u64;
    let lower_viol = records
        .iter()
        .filter(|r| r.lower_excess() > SANDWICH_TOL)
        .count();
    let upper_viol = records
        .iter()
        .filter(|r| r.upper_gap() < -SANDWICH_TOL)
        .count();
    let worst_lower = max_of(records.iter().map(Fig1Record::lower_excess));
    let worst_upper = max_of(records.iter().map(|r| -r.upper_gap()));
    let max_diff = max_of(records.iter().map(Fig1Record::numeric_diff));
    let max_gap = max_of(records.iter().map(Fig1Record::upper_gap));
    let mean_gap = records.iter().map(Fig1Record::upper_gap).sum::<f64>() / n as f64;

    let mut summary = BTreeMap::new();
    summary.insert("samples".into(), n as f64);
    summary.insert("lower_violations".into(), lower_viol as f64);
    summary.insert("upper_violations".into(), upper_viol as f64);
    summary.insert("max_lower_excess".into(), worst_lower);
    summary.insert("max_upper_excess".into(), worst_upper);
    summary.insert("max_upper_gap".into(), max_gap);
    summary.insert("mean_upper_gap".into(), mean_gap);
    summary.insert("max_numeric_diff".into(), max_diff);

    let violations = lower_viol + upper_viol;
    let checks = vec![
        Check::new(
            "sandwich",
            violations == 0,
            worst_lower.max(worst_upper),
            SANDWICH_TOL,
            n,
            format!("{lower_viol} lower and {upper_viol} upper violations out of {n}"),
        ),
        Check::at_most("closed_vs_numeric", max_diff, cfg.agreement_tol(), n),
    ];
    Analysis {
        summary,
        checks,
        extras: Vec::new(),
        plot: PlotSpec {
            kind: "scatter".into(),
            x: "irreality_closed".into(),
            y: vec!["upper_bound".into(), "lower_bound".into()],
            group_by: None,
            x_label: "irreality of X (bits)".into(),
            y_label: "bound (bits)".into(),
            notes: vec![
                "logarithms base 2".into(),
                "identity line marks a tight bound".into(),
            ],
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuRecord {
    pub index: u64,
    pub r: f64,
    pub lambda: f64,
    pub info: f64,
    pub irreality: f64,
    pub mu: f64,
}

impl SweepRecord for MuRecord {
    fn header() -> &'static [&'static str] {
        &["index", "r", "lambda", "info", "irreality", "mu"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.index.into(),
            self.r.into(),
            self.lambda.into(),
            self.info.into(),
            self.irreality.into(),
            self.mu.into(),
        ]
    }
}

fn mu_sample(seed: u64, index: u64) -> Result<Option<MuRecord>> {
    let mut rng = RngStream::new(seed, index).rng();
    let (r, lambda) = random_qubit_config(&mut rng);
    let c = QubitConfig::new(r, lambda)?;
    match mu_exponent(c) {
        Ok(mu) => Ok(Some(MuRecord {
            index,
            r,
            lambda,
            info: qubit_information(r),
            irreality: qubit_irreality(c),
            mu,
        })),
        Err(Error::DegenerateConfig(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Draws indices in order until `samples` configurations admit the
/// exponent inversion; degenerate draws before the last accepted one are counted.
pub fn run_mu_fit(cfg: &ExperimentConfig) -> Result<Sweep<MuRecord>> {
    execute(cfg, ExperimentId::MuFit, |cfg| {
        let target = cfg.samples;
        let mut records = Vec::with_capacity(target);
        let mut degenerate = 0usize;
        let mut next = 0u64;
        while records.len() < target {
            let want = target - records.len();
            let batch = (want + want / 64 + 16) as u64;
            let results = par_indexed(next..next + batch, |i| mu_sample(cfg.seed, i))?;
            next += batch;
            for res in results {
                if records.len() == target {
                    break;
                }
                match res {
                    Some(rec) => records.push(rec),
                    None => degenerate += 1,
                }
            }
        }
        let analysis = analyze_mu(cfg, &records, degenerate);
        Ok((records, analysis))
    })
}

fn analyze_mu(cfg: &ExperimentConfig, records: &[MuRecord], degenerate: usize) -> Analysis {
    let n = records.len() as u64;
    let min = min_of(records.iter().map(|r| r.mu));
    let max = max_of(records.iter().map(|r| r.mu));
    let argmin = records.iter().min_by(|a, b| a.mu.total_cmp(&b.mu));

    let (lo, hi) = MU_HISTOGRAM_RANGE;
    let bins = cfg.histogram_bins;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let (mut below, mut above) = (0usize, 0usize);
    for rec in records {
        if rec.mu < lo {
            below += 1;
        } else if rec.mu > hi {
            above += 1;
        } else {
            let k = (((rec.mu - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    let rows = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            vec![
                Cell::Num(lo + k as f64 * width),
                Cell::Num(lo + (k + 1) as f64 * width),
                Cell::Int(c),
            ]
        })
        .collect();

    let mut summary = BTreeMap::new();
    summary.insert("valid".into(), n as f64);
    summary.insert("degenerate".into(), degenerate as f64);
    summary.insert("mu_min".into(), min);
    summary.insert("mu_max".into(), max);
    summary.insert("histogram_below".into(), below as f64);
    summary.insert("histogram_above".into(), above as f64);
    if let Some(a) = argmin {
        summary.insert("mu_min_r".into(), a.r);
        summary.insert("mu_min_lambda".into(), a.lambda);
    }

    let checks = vec![
        Check::new(
            "mu_min",
            min > 0.7,
            min,
            0.7,
            n,
            format!("min mu {} > 0.7", super::fmt_sig(min)),
        ),
        Check::at_most("mu_max", max, 1.0 + 1e-9, n),
    ];
    Analysis {
        summary,
        checks,
        extras: vec![ExtraTable {
            name: "mu_fit_histogram".into(),
            header: vec!["bin_lo".into(), "bin_hi".into(), "count".into()],
            rows,
        }],
        plot: PlotSpec {
            kind: "histogram".into(),
            x: "mu".into(),
            y: vec![],
            group_by: None,
            x_label: "mu".into(),
            y_label: "count".into(),
            notes: vec!["pre-binned counts in mu_fit_histogram.csv".into()],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fig1_run_is_consistent() {
        let cfg = ExperimentConfig::new(ExperimentId::Fig1, 3)
            .with_samples(500)
            .with_threads(2);
        let sweep = run_fig1(&cfg).unwrap();
        assert_eq!(sweep.records.len(), 500);
        assert!(sweep
            .records
            .iter()
            .enumerate()
            .all(|(i, r)| r.index == i as u64));
        assert!(sweep.check("closed_vs_numeric").unwrap().passed);
        assert!(sweep.records.iter().all(|r| r.lower_excess() <= 1e-9));
    }

    #[test]
    fn fig1_thread_count_invariant() {
        let base = ExperimentConfig::new(ExperimentId::Fig1, 11).with_samples(200);
        let a = run_fig1(&base.clone().with_threads(1)).unwrap();
        let b = run_fig1(&base.with_threads(3)).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn mu_fit_counts_and_stops_at_target() {
        let cfg = ExperimentConfig::new(ExperimentId::MuFit, 5)
            .with_samples(300)
            .with_threads(2);
        let sweep = run_mu_fit(&cfg).unwrap();
        assert_eq!(sweep.records.len(), 300);
        let last = sweep.records.last().unwrap().index;
        assert_eq!(last + 1, 300 + sweep.summary["degenerate"] as u64);
        assert!(sweep.all_passed());
        let hist: u64 = sweep.extras[0]
            .rows
            .iter()
            .map(|r| if let Cell::Int(c) = r[2] { c } else { 0 })
            .sum();
        assert_eq!(
            hist as f64 + sweep.summary["histogram_below"] + sweep.summary["histogram_above"],
            300.0
        );
    }

    #[test]
    fn mu_fit_batching_is_deterministic() {
        let base = ExperimentConfig::new(ExperimentId::MuFit, 8);
        let a = run_mu_fit(&base.clone().with_samples(50)).unwrap();
        let b = run_mu_fit(&base.with_samples(120)).unwrap();
        assert_eq!(a.records[..], b.records[..50]);
    }
}
