//! CSV and JSON result files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{ExperimentConfig, MetricsRecord, Scenario};
use crate::error::{Error, Result};

/// One line of the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub scenario: &'static str,
    pub solution: &'static str,
    pub beta: f64,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "G")]
    pub g: usize,
    pub d: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub ebn0: f64,
    pub mse_tau: f64,
    pub ser: Option<f64>,
    pub per: Option<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl ResultRow {
    pub fn new(cfg: &ExperimentConfig, r: &MetricsRecord) -> Self {
        Self {
            scenario: cfg.scenario.name(),
            solution: cfg.solution.name(),
            beta: cfg.beta,
            q: cfg.q,
            g: cfg.g,
            d: cfg.d,
            l: cfg.l,
            n: cfg.n,
            ebn0: r.ebn0,
            mse_tau: r.mse_tau,
            ser: r.ser,
            per: r.per,
            trials: r.trials_run,
            seed: cfg.seed,
        }
    }
}

/// `results.csv` -> `results.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// `results.csv` -> `results_hist_10dB.csv`.
pub fn histogram_path(path: &Path, ebn0: f64) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    path.with_file_name(format!("{stem}_hist_{ebn0}dB.csv"))
}

#[derive(Serialize)]
struct HistRow {
    bin_lo: f64,
    bin_hi: f64,
    density: f64,
}

/// Writes the results CSV at `path`, the config as a JSON sidecar and, for
/// the square-error distribution scenario, one histogram CSV per point.
/// Returns the written paths.
pub fn emit_results(cfg: &ExperimentConfig, records: &[MetricsRecord], path: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::Input("no records to write".into()));
    }
    let mut written = Vec::new();
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(ResultRow::new(cfg, r))?;
    }
    w.flush()?;
    written.push(path.to_path_buf());

    let side = sidecar_path(path);
    std::fs::write(&side, serde_json::to_string_pretty(cfg)? + "\n")?;
    written.push(side);

    if cfg.scenario == Scenario::EstimatorPdf {
        for r in records {
            let Some(h) = &r.histogram else { continue };
            let hp = histogram_path(path, r.ebn0);
            let mut w = csv::Writer::from_path(&hp)?;
            for (e, density) in h.edges.windows(2).zip(h.density()) {
                w.serialize(HistRow {
                    bin_lo: e[0],
                    bin_hi: e[1],
                    density,
                })?;
            }
            w.flush()?;
            written.push(hp);
        }
    }
    Ok(written)
}
