//! Sweeps, regime reports and oracle comparisons behind the `ptscatter`
//! command.

pub mod config;
pub mod error;
pub mod output;
pub mod singularity;
pub mod sweep;

pub use config::{OutputFormat, Range, SweepConfig, SweepOverrides, Tolerances, OUTPUT_DIR_ENV};
pub use error::CliError;
pub use output::{oracle_comparison, point_report, OracleComparison, PointReport};
pub use singularity::{compute_singularity, run_singularity, SingularityRequest};
pub use sweep::{compute_sweep, run_sweep, SweepOutput, SweepRecord};
