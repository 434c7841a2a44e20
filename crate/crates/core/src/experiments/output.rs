//! CSV, manifest and plot-description writers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{Cell, Check, ExperimentConfig, PlotSpec, Sweep, SweepRecord};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WrittenFiles {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub plot: PathBuf,
    pub extras: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    seed: u64,
    samples: usize,
    tolerances: BTreeMap<String, f64>,
    started_at: &'a str,
    duration_s: f64,
    threads: usize,
    version: &'static str,
    rows: usize,
    config: &'a ExperimentConfig,
    summary: &'a BTreeMap<String, f64>,
    checks: &'a [Check],
    files: Vec<String>,
}

#[derive(Serialize)]
struct PlotDescription<'a> {
    data: String,
    columns: &'static [&'static str],
    #[serde(flatten)]
    spec: &'a PlotSpec,
}

fn write_table(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<Cell>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Writes `<id>.csv`, `<id>.manifest.json`, `<id>.plot.json` and any extra
/// tables into `dir`, creating it if needed.
pub fn write_sweep<R: SweepRecord>(sweep: &Sweep<R>, dir: &Path) -> Result<WrittenFiles> {
    fs::create_dir_all(dir)?;
    let id = sweep.config.experiment.as_str();
    let csv_path = dir.join(format!("{id}.csv"));
    write_table(
        &csv_path,
        R::header(),
        sweep.records.iter().map(SweepRecord::cells),
    )?;

    let mut extras = Vec::new();
    for table in &sweep.extras {
        let path = dir.join(format!("{}.csv", table.name));
        let header: Vec<&str> = table.header.iter().map(String::as_str).collect();
        write_table(&path, &header, table.rows.iter().cloned())?;
        extras.push(path);
    }

    let plot_path = dir.join(format!("{id}.plot.json"));
    let plot = PlotDescription {
        data: file_name(&csv_path),
        columns: R::header(),
        spec: &sweep.plot,
    };
    fs::write(&plot_path, serde_json::to_string_pretty(&plot)? + "\n")?;

    let manifest_path = dir.join(format!("{id}.manifest.json"));
    let mut files = vec![file_name(&csv_path), file_name(&plot_path)];
    files.extend(extras.iter().map(|p| file_name(p)));
    let manifest = Manifest {
        experiment: id,
        seed: sweep.config.seed,
        samples: sweep.config.samples,
        tolerances: sweep.config.tolerances(),
        started_at: &sweep.started_at,
        duration_s: sweep.duration_s,
        threads: sweep.threads,
        version: env!("CARGO_PKG_VERSION"),
        rows: sweep.records.len(),
        config: &sweep.config,
        summary: &sweep.summary,
        checks: &sweep.checks,
        files,
    };
    fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;

    Ok(WrittenFiles {
        csv: csv_path,
        manifest: manifest_path,
        plot: plot_path,
        extras,
    })
}
