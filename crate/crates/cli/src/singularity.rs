//! Spectral-singularity scan reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use ptscatter::regimes::MIN_GRID_K;
use ptscatter::{singularity_scan, SingularityParams, SingularityScan};

use crate::config::OutputFormat;
use crate::error::CliError;
use crate::output::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityRequest {
    pub n: u32,
    pub alpha: f64,
    pub window: (f64, f64),
    pub samples: usize,
    pub format: OutputFormat,
    /// `-` writes to standard output.
    pub output: PathBuf,
}

/// `[alpha - 0.5, alpha + 0.5]`, clamped to the smallest grid wave number.
pub fn default_window(alpha: f64) -> (f64, f64) {
    ((alpha - 0.5).max(MIN_GRID_K), alpha + 0.5)
}

pub fn compute_singularity(req: &SingularityRequest) -> Result<SingularityScan, CliError> {
    let s = SingularityParams::new(req.n, req.alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    singularity_scan(&s, req.window, req.samples).map_err(|e| CliError::Usage(e.to_string()))
}

/// Summary as `#` comment lines, then `k,T,R_left,R_right,capped`.
pub fn write_singularity_csv<W: Write>(scan: &SingularityScan, w: W) -> Result<(), CliError> {
    let mut w = w;
    let io_err = |e| CliError::io("<csv>", e);
    writeln!(w, "# n = {}", scan.params.n).map_err(io_err)?;
    writeln!(w, "# alpha = {}", fmt_f64(scan.params.alpha)).map_err(io_err)?;
    writeln!(w, "# k_star = {}", fmt_f64(scan.k_star)).map_err(io_err)?;
    writeln!(w, "# peak_T = {}", fmt_f64(scan.peak_t)).map_err(io_err)?;
    let pole = scan.pole_k.map(fmt_f64).unwrap_or_else(|| "none".into());
    writeln!(w, "# pole_k = {pole}").map_err(io_err)?;
    writeln!(w, "# pole_confirmed = {}", scan.pole_confirmed).map_err(io_err)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "T", "R_left", "R_right", "capped"])?;
    for s in &scan.samples {
        out.write_record([
            fmt_f64(s.k),
            fmt_f64(s.transmitivity),
            fmt_f64(s.reflectivity_left),
            fmt_f64(s.reflectivity_right),
            s.capped.to_string(),
        ])?;
    }
    out.flush().map_err(io_err)?;
    Ok(())
}

pub fn write_singularity<W: Write>(
    scan: &SingularityScan,
    format: OutputFormat,
    w: W,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Csv => write_singularity_csv(scan, w),
        OutputFormat::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, scan)?;
            writeln!(w).map_err(|e| CliError::io("<json>", e))
        }
    }
}

pub fn run_singularity(req: &SingularityRequest) -> Result<SingularityScan, CliError> {
    let scan = compute_singularity(req)?;
    if req.output.as_os_str() == "-" {
        write_singularity(&scan, req.format, io::stdout().lock())?;
    } else {
        let path = &req.output;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        write_singularity(&scan, req.format, &mut w)?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(scan)
}
