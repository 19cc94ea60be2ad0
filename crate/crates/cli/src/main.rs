use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptscatter::scarf::AmplitudeConfig;
use ptscatter::{
    classify, k_grid, ClassifyTolerances, ComplexScalar, OracleConfig, ReflectionForm, ScarfParams,
    WaveNumber,
};
use ptscatter_cli::config::output_dir_from_env;
use ptscatter_cli::singularity::default_window;
use ptscatter_cli::{
    oracle_comparison, point_report, run_singularity, run_sweep, CliError, OutputFormat, Range,
    SingularityRequest, SweepOverrides,
};

#[derive(Parser, Debug)]
#[command(
    name = "ptscatter",
    version,
    about = "Scattering from the complex PT-symmetric Scarf II potential"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Amplitudes and coefficients at a single (A, B, k).
    Amplitudes(PointArgs),
    /// Grid sweep over A, B and k, written as CSV or JSON.
    Sweep(SweepArgs),
    /// Regime flags and residuals for one (A, B) over a k grid.
    Classify(ClassifyArgs),
    /// Scan T around a spectral singularity.
    Singularity(SingularityArgs),
    /// Closed-form amplitudes against direct numerical integration.
    OracleCompare(OracleArgs),
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Real part of A.
    #[arg(long = "a", allow_hyphen_values = true)]
    a: f64,
    /// Real part of B.
    #[arg(long = "b", allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_im: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<ScarfParams, CliError> {
        ScarfParams::new(
            ComplexScalar::new(self.a, self.a_im),
            ComplexScalar::new(self.b, self.b_im),
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn wave_number(k: f64) -> Result<WaveNumber, CliError> {
    WaveNumber::new(k).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    k: f64,
    /// Use sinh/cosh of πB in the reflection amplitude (comparison only).
    #[arg(long)]
    hyperbolic: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// start:stop:count or a single value.
    #[arg(long = "a", allow_hyphen_values = true)]
    a_range: Option<Range>,
    #[arg(long = "b", allow_hyphen_values = true)]
    b_range: Option<Range>,
    #[arg(long = "k")]
    k_range: Option<Range>,
    /// Cross-check every point against the numerical oracle.
    #[arg(long)]
    oracle: bool,
    /// Residual tolerance for regime flags.
    #[arg(long)]
    tol: Option<f64>,
    /// Tolerance for snapping A, B to integers and half-integers.
    #[arg(long)]
    snap_tol: Option<f64>,
    #[arg(long)]
    oracle_rtol: Option<f64>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Output file, `-` for standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long = "k", default_value = "0.1:3:30")]
    k_range: Range,
    #[arg(long, default_value_t = ClassifyTolerances::default().residual)]
    tol: f64,
    #[arg(long, default_value_t = ClassifyTolerances::default().snap)]
    snap_tol: f64,
}

#[derive(Args, Debug)]
struct SingularityArgs {
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long)]
    alpha: f64,
    /// lo:hi, default alpha ± 0.5.
    #[arg(long)]
    window: Option<String>,
    #[arg(long, default_value_t = 201)]
    samples: usize,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Output file, `-` for standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    k: f64,
    /// Relative tolerance of the integrator.
    #[arg(long, default_value_t = OracleConfig::default().relative_tolerance)]
    tol: f64,
    #[arg(long, default_value_t = OracleConfig::default().domain_half_width)]
    half_width: f64,
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("window must be lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn default_output(name: &str, format: OutputFormat) -> PathBuf {
    output_dir_from_env()
        .unwrap_or_else(|| PathBuf::from("."))
        .join(format!("{name}.{}", format.extension()))
}

fn describe(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "standard output".into()
    } else {
        path.display().to_string()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Amplitudes(args) => {
            let cfg = AmplitudeConfig {
                reflection_form: if args.hyperbolic {
                    ReflectionForm::Hyperbolic
                } else {
                    ReflectionForm::Trigonometric
                },
                ..AmplitudeConfig::default()
            };
            print_json(&point_report(
                &args.params.params()?,
                wave_number(args.k)?,
                &cfg,
            )?)
        }
        Command::Sweep(args) => {
            let file = match &args.config {
                Some(path) => SweepOverrides::read(path)?,
                None => SweepOverrides::default(),
            };
            let flags = SweepOverrides {
                a_range: args.a_range,
                b_range: args.b_range,
                k_range: args.k_range,
                oracle: args.oracle.then_some(true),
                tol: args.tol,
                snap_tol: args.snap_tol,
                oracle_rtol: args.oracle_rtol,
                format: args.format,
                output: args.output,
                ..SweepOverrides::default()
            };
            let cfg = file
                .overlay(flags)
                .resolve(output_dir_from_env().as_deref())?;
            let out = run_sweep(&cfg)?;
            eprintln!(
                "{} records, {} regime reports -> {}",
                out.records.len(),
                out.regime_reports.len(),
                describe(&cfg.output_path)
            );
            let singular = out.singular_rows();
            if singular > 0 {
                eprintln!("{singular} singular points flagged");
            }
            match out.oracle_failures() {
                0 => Ok(()),
                n => Err(CliError::Numerical(format!("oracle failed at {n} points"))),
            }
        }
        Command::Classify(args) => {
            let grid = k_grid(args.k_range.start, args.k_range.stop, args.k_range.count)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let tol = ClassifyTolerances {
                snap: args.snap_tol,
                residual: args.tol,
            };
            let report = classify(&args.params.params()?, &grid, &tol)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            print_json(&report)
        }
        Command::Singularity(args) => {
            let window = match &args.window {
                Some(w) => parse_window(w)?,
                None => default_window(args.alpha),
            };
            let output = args
                .output
                .unwrap_or_else(|| default_output("singularity", args.format));
            let req = SingularityRequest {
                n: args.n,
                alpha: args.alpha,
                window,
                samples: args.samples,
                format: args.format,
                output,
            };
            let scan = run_singularity(&req)?;
            let pole = match scan.pole_k {
                Some(k) if scan.pole_confirmed => format!("pole confirmed at k = {k}"),
                Some(k) => format!("pole at k = {k} not resolved by the grid"),
                None => "no pole in window".into(),
            };
            eprintln!(
                "peak T = {:e} at k = {}; {pole} -> {}",
                scan.peak_t,
                scan.k_star,
                describe(&req.output)
            );
            Ok(())
        }
        Command::OracleCompare(args) => {
            let cfg = OracleConfig {
                relative_tolerance: args.tol,
                domain_half_width: args.half_width,
                ..OracleConfig::default()
            };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            print_json(&oracle_comparison(
                &args.params.params()?,
                wave_number(args.k)?,
                &cfg,
            )?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
