//! Grid sweeps over `(A, B, k)`: one record per point, one regime report per
//! `(A, B)`.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use ptscatter::{
    amplitudes, classify, k_grid, scatter_numeric_both, OracleConfig, RegimeReport, ScarfParams,
    WaveNumber,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, SweepConfig};
use crate::error::CliError;
use crate::output::{fmt_f64, fmt_opt};

pub const CSV_COLUMNS: [&str; 9] = [
    "A",
    "B",
    "k",
    "T",
    "R_left",
    "R_right",
    "unitarity_defect",
    "reciprocity_defect",
    "pseudo_unitarity_defect",
];

pub const ORACLE_COLUMNS: [&str; 3] = ["oracle_dt", "oracle_dr_left", "oracle_dr_right"];

/// Coefficients and defects at one grid point. Numeric fields are `None`
/// when the point is singular or the oracle failed; `error` says why.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub A: f64,
    pub B: f64,
    pub k: f64,
    pub T: Option<f64>,
    pub R_left: Option<f64>,
    pub R_right: Option<f64>,
    /// `R_left + T - 1`
    pub unitarity_defect: Option<f64>,
    /// `R_left - R_right`
    pub reciprocity_defect: Option<f64>,
    /// `T + sqrt(R_left R_right) - 1`
    pub pseudo_unitarity_defect: Option<f64>,
    /// `max(|t_left - t|, |t_right - t|)` against the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_dr_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_dr_right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub oracle_failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub config: SweepConfig,
    pub records: Vec<SweepRecord>,
    pub regime_reports: Vec<RegimeReport>,
}

impl SweepOutput {
    pub fn oracle_failures(&self) -> usize {
        self.records.iter().filter(|r| r.oracle_failed).count()
    }

    pub fn singular_rows(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.T.is_none() && !r.oracle_failed)
            .count()
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut w = w;
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w).map_err(|e| CliError::io("<json>", e))?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let oracle = self.config.oracle_enabled;
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
        if oracle {
            header.extend(ORACLE_COLUMNS);
        }
        out.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![
                fmt_f64(r.A),
                fmt_f64(r.B),
                fmt_f64(r.k),
                fmt_opt(r.T),
                fmt_opt(r.R_left),
                fmt_opt(r.R_right),
                fmt_opt(r.unitarity_defect),
                fmt_opt(r.reciprocity_defect),
                fmt_opt(r.pseudo_unitarity_defect),
            ];
            if oracle {
                row.extend([
                    fmt_opt(r.oracle_dt),
                    fmt_opt(r.oracle_dr_left),
                    fmt_opt(r.oracle_dr_right),
                ]);
            }
            out.write_record(&row)?;
        }
        out.flush().map_err(|e| CliError::io("<csv>", e))?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, w: W) -> Result<(), CliError> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }
}

fn evaluate(a: f64, b: f64, k: WaveNumber, oracle: Option<&OracleConfig>) -> SweepRecord {
    let mut record = SweepRecord {
        A: a,
        B: b,
        k: k.value(),
        T: None,
        R_left: None,
        R_right: None,
        unitarity_defect: None,
        reciprocity_defect: None,
        pseudo_unitarity_defect: None,
        oracle_dt: None,
        oracle_dr_left: None,
        oracle_dr_right: None,
        error: None,
        oracle_failed: false,
    };
    let p = match ScarfParams::real(a, b) {
        Ok(p) => p,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };
    let amp = match amplitudes(&p, k) {
        Ok(amp) => amp,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };
    let c = amp.coefficients();
    record.T = Some(c.transmitivity);
    record.R_left = Some(c.reflectivity_left);
    record.R_right = Some(c.reflectivity_right);
    record.unitarity_defect = Some(c.unitarity_defect());
    record.reciprocity_defect = Some(c.reciprocity_defect());
    record.pseudo_unitarity_defect = Some(c.pseudo_unitarity_defect());

    if let Some(cfg) = oracle {
        match scatter_numeric_both(&p, k, cfg) {
            Ok(num) => {
                record.oracle_dt = Some(
                    (num.t_left - amp.t)
                        .norm()
                        .max((num.t_right - amp.t).norm()),
                );
                record.oracle_dr_left = Some((num.r_left - amp.r_left).norm());
                record.oracle_dr_right = Some((num.r_right - amp.r_right).norm());
            }
            Err(e) => {
                record.error = Some(format!("oracle: {e}"));
                record.oracle_failed = true;
            }
        }
    }
    record
}

/// Evaluates the whole grid in parallel; records come back in grid order
/// (A outermost, then B, then k).
pub fn compute_sweep(cfg: &SweepConfig) -> Result<SweepOutput, CliError> {
    cfg.validate()?;
    let ks = k_grid(cfg.k_range.start, cfg.k_range.stop, cfg.k_range.count)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let pairs: Vec<(f64, f64)> = cfg
        .a_range
        .values()
        .into_iter()
        .flat_map(|a| cfg.b_range.values().into_iter().map(move |b| (a, b)))
        .collect();
    let points: Vec<(f64, f64, WaveNumber)> = pairs
        .iter()
        .flat_map(|&(a, b)| ks.iter().map(move |&k| (a, b, k)))
        .collect();

    let oracle = cfg.oracle_enabled.then_some(&cfg.tolerances.oracle);
    let records: Vec<SweepRecord> = points
        .par_iter()
        .map(|&(a, b, k)| evaluate(a, b, k, oracle))
        .collect();

    let tol = cfg.tolerances.classify;
    let regime_reports: Vec<RegimeReport> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let p = ScarfParams::real(a, b).ok()?;
            // singular pairs are already flagged row by row
            classify(&p, &ks, &tol).ok()
        })
        .collect();

    Ok(SweepOutput {
        config: cfg.clone(),
        records,
        regime_reports,
    })
}

/// Computes the sweep and writes it to the configured destination.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, CliError> {
    let output = compute_sweep(cfg)?;
    if cfg.writes_to_stdout() {
        let stdout = io::stdout();
        output.write(cfg.output_format, stdout.lock())?;
    } else {
        let path = &cfg.output_path;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        output.write(cfg.output_format, &mut w)?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(output)
}
