//! Sweep configuration: `key = value` files, command-line overrides and
//! validation.
//!
//! ```text
//! # comments start with '#'
//! A_range = 0.5:0.5:1
//! B_range = -1:1:21
//! k_range = 0.1:3:30
//! oracle = false
//! tol = 1e-8
//! format = json
//! output = scan.json
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ptscatter::regimes::{linspace, MIN_GRID_K};
use ptscatter::{ClassifyTolerances, OracleConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the directory for outputs without an
/// explicit path.
pub const OUTPUT_DIR_ENV: &str = "PTSCATTER_OUTPUT_DIR";

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            count: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }

    fn validate(&self, name: &str) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(format!("{name}: bounds must be finite"));
        }
        if self.count == 0 {
            return Err(format!("{name}: count must be at least 1"));
        }
        if self.start > self.stop {
            return Err(format!(
                "{name}: start {} exceeds stop {}",
                self.start, self.stop
            ));
        }
        Ok(())
    }
}

/// Accepts `start:stop:count` or a single value.
impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number {t:?} in range {s:?}"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Range::single(num(v)?)),
            [a, b, n] => Ok(Range {
                start: num(a)?,
                stop: num(b)?,
                count: n
                    .trim()
                    .parse()
                    .map_err(|_| format!("invalid count {n:?} in range {s:?}"))?,
            }),
            _ => Err(format!(
                "expected start:stop:count or a single value, got {s:?}"
            )),
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format {other:?} (csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tolerances {
    pub classify: ClassifyTolerances,
    pub oracle: OracleConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(rename = "A_range")]
    pub a_range: Range,
    #[serde(rename = "B_range")]
    pub b_range: Range,
    pub k_range: Range,
    pub oracle_enabled: bool,
    pub tolerances: Tolerances,
    pub output_format: OutputFormat,
    /// `-` writes to standard output.
    pub output_path: PathBuf,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.a_range.validate("A_range").map_err(CliError::Usage)?;
        self.b_range.validate("B_range").map_err(CliError::Usage)?;
        self.k_range.validate("k_range").map_err(CliError::Usage)?;
        if self.k_range.start < MIN_GRID_K {
            return Err(CliError::Usage(format!(
                "k_range: start {} below {MIN_GRID_K}",
                self.k_range.start
            )));
        }
        let c = &self.tolerances.classify;
        if !(c.snap >= 0.0 && c.residual > 0.0) {
            return Err(CliError::Usage(
                "tolerances must be positive (snap may be zero)".into(),
            ));
        }
        if self.oracle_enabled {
            self.tolerances
                .oracle
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(())
    }

    pub fn writes_to_stdout(&self) -> bool {
        self.output_path.as_os_str() == "-"
    }
}

/// Settings from a config file or the command line; unset fields fall back
/// to the layer below.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOverrides {
    pub a_range: Option<Range>,
    pub b_range: Option<Range>,
    pub k_range: Option<Range>,
    pub oracle: Option<bool>,
    pub tol: Option<f64>,
    pub snap_tol: Option<f64>,
    pub oracle_rtol: Option<f64>,
    pub oracle_half_width: Option<f64>,
    pub oracle_max_steps: Option<usize>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

impl SweepOverrides {
    /// `other` wins wherever it is set.
    pub fn overlay(self, other: SweepOverrides) -> SweepOverrides {
        SweepOverrides {
            a_range: other.a_range.or(self.a_range),
            b_range: other.b_range.or(self.b_range),
            k_range: other.k_range.or(self.k_range),
            oracle: other.oracle.or(self.oracle),
            tol: other.tol.or(self.tol),
            snap_tol: other.snap_tol.or(self.snap_tol),
            oracle_rtol: other.oracle_rtol.or(self.oracle_rtol),
            oracle_half_width: other.oracle_half_width.or(self.oracle_half_width),
            oracle_max_steps: other.oracle_max_steps.or(self.oracle_max_steps),
            format: other.format.or(self.format),
            output: other.output.or(self.output),
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<SweepOverrides, CliError> {
        let mut out = SweepOverrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                path: path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let float = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| err(format!("{key}: invalid number {v:?}")))
            };
            match key {
                "A_range" => out.a_range = Some(value.parse().map_err(err)?),
                "B_range" => out.b_range = Some(value.parse().map_err(err)?),
                "k_range" => out.k_range = Some(value.parse().map_err(err)?),
                "oracle" => {
                    out.oracle = Some(value.parse().map_err(|_| {
                        err(format!("oracle: expected true or false, got {value:?}"))
                    })?)
                }
                "tol" => out.tol = Some(float(value)?),
                "snap_tol" => out.snap_tol = Some(float(value)?),
                "oracle_rtol" => out.oracle_rtol = Some(float(value)?),
                "oracle_half_width" => out.oracle_half_width = Some(float(value)?),
                "oracle_max_steps" => {
                    out.oracle_max_steps =
                        Some(value.parse().map_err(|_| {
                            err(format!("oracle_max_steps: invalid count {value:?}"))
                        })?)
                }
                "format" => out.format = Some(value.parse().map_err(err)?),
                "output" => out.output = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<SweepOverrides, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Fills unset fields with defaults. Without an explicit output path the
    /// file goes to `output_dir` (or the working directory) as `sweep.<ext>`.
    pub fn resolve(self, output_dir: Option<&Path>) -> Result<SweepConfig, CliError> {
        let output_format = self.format.unwrap_or_default();
        let output_path = self.output.unwrap_or_else(|| {
            output_dir
                .unwrap_or(Path::new("."))
                .join(format!("sweep.{}", output_format.extension()))
        });
        let defaults = ClassifyTolerances::default();
        let oracle_defaults = OracleConfig::default();
        let cfg = SweepConfig {
            a_range: self.a_range.unwrap_or(Range::single(0.5)),
            b_range: self.b_range.unwrap_or(Range::single(0.25)),
            k_range: self.k_range.unwrap_or(Range {
                start: 0.1,
                stop: 3.0,
                count: 30,
            }),
            oracle_enabled: self.oracle.unwrap_or(false),
            tolerances: Tolerances {
                classify: ClassifyTolerances {
                    snap: self.snap_tol.unwrap_or(defaults.snap),
                    residual: self.tol.unwrap_or(defaults.residual),
                },
                oracle: OracleConfig {
                    domain_half_width: self
                        .oracle_half_width
                        .unwrap_or(oracle_defaults.domain_half_width),
                    relative_tolerance: self
                        .oracle_rtol
                        .unwrap_or(oracle_defaults.relative_tolerance),
                    max_steps: self.oracle_max_steps.unwrap_or(oracle_defaults.max_steps),
                },
            },
            output_format,
            output_path,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Directory from [`OUTPUT_DIR_ENV`], if set and non-empty.
pub fn output_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!("0.5".parse::<Range>().unwrap(), Range::single(0.5));
        let r: Range = "-1:1:5".parse().unwrap();
        assert_eq!(r.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("1:2".parse::<Range>().is_err());
        assert!("a:2:3".parse::<Range>().is_err());
        assert!("1:2:x".parse::<Range>().is_err());
        assert_eq!(r.to_string().parse::<Range>().unwrap(), r);
    }

    #[test]
    fn parses_file_with_comments() {
        let text = "# sweep\nA_range = 0.5\nB_range = 0:1:3  # inline\n\nk_range=0.1:3:30\noracle = true\ntol = 1e-9\nformat = JSON\noutput = out.json\n";
        let o = SweepOverrides::parse(text, Path::new("c.cfg")).unwrap();
        assert_eq!(o.a_range, Some(Range::single(0.5)));
        assert_eq!(o.b_range.unwrap().count, 3);
        assert_eq!(o.oracle, Some(true));
        assert_eq!(o.tol, Some(1e-9));
        assert_eq!(o.format, Some(OutputFormat::Json));
        assert_eq!(o.output, Some(PathBuf::from("out.json")));
    }

    #[test]
    fn reports_line_of_bad_entry() {
        let err =
            SweepOverrides::parse("A_range = 1\nbogus = 2\n", Path::new("c.cfg")).unwrap_err();
        match err {
            CliError::Config { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
        assert!(SweepOverrides::parse("no equals sign", Path::new("c")).is_err());
        assert!(SweepOverrides::parse("oracle = maybe", Path::new("c")).is_err());
    }

    #[test]
    fn command_line_wins_over_file() {
        let file = SweepOverrides {
            a_range: Some(Range::single(1.0)),
            tol: Some(1e-6),
            ..Default::default()
        };
        let cli = SweepOverrides {
            tol: Some(1e-7),
            ..Default::default()
        };
        let cfg = file.overlay(cli).resolve(None).unwrap();
        assert_eq!(cfg.a_range, Range::single(1.0));
        assert_eq!(cfg.tolerances.classify.residual, 1e-7);
        assert_eq!(cfg.output_path, Path::new(".").join("sweep.csv"));
    }

    #[test]
    fn output_dir_applies_only_without_explicit_path() {
        let dir = Path::new("/tmp/out");
        let cfg = SweepOverrides {
            format: Some(OutputFormat::Json),
            ..Default::default()
        }
        .resolve(Some(dir))
        .unwrap();
        assert_eq!(cfg.output_path, dir.join("sweep.json"));
        let cfg = SweepOverrides {
            output: Some("x.csv".into()),
            ..Default::default()
        }
        .resolve(Some(dir))
        .unwrap();
        assert_eq!(cfg.output_path, Path::new("x.csv"));
    }

    #[test]
    fn validation() {
        let bad_k = SweepOverrides {
            k_range: Some("0:1:3".parse().unwrap()),
            ..Default::default()
        };
        assert!(matches!(bad_k.resolve(None), Err(CliError::Usage(_))));
        let reversed = SweepOverrides {
            a_range: Some("1:0:3".parse().unwrap()),
            ..Default::default()
        };
        assert!(reversed.resolve(None).is_err());
        let empty = SweepOverrides {
            b_range: Some("0:1:0".parse().unwrap()),
            ..Default::default()
        };
        assert!(empty.resolve(None).is_err());
        let narrow_oracle = SweepOverrides {
            oracle: Some(true),
            oracle_half_width: Some(5.0),
            ..Default::default()
        };
        assert!(narrow_oracle.resolve(None).is_err());
    }
}
