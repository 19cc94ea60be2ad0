//! Number formatting and the single-point reports printed by the CLI.

use ptscatter::scarf::amplitudes_with;
use ptscatter::{
    scatter_numeric_both, AmplitudeConfig, ComplexScalar, OracleAmplitudes, OracleConfig,
    ScarfParams, ScatteringAmplitudes, WaveNumber,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_owned()
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Empty for a missing value.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub params: ScarfParams,
    pub k: WaveNumber,
    pub t: ComplexScalar,
    pub r_left: ComplexScalar,
    pub r_right: ComplexScalar,
    pub T: f64,
    pub R_left: f64,
    pub R_right: f64,
    pub unitarity_defect: f64,
    pub reciprocity_defect: f64,
    pub pseudo_unitarity_defect: f64,
}

impl PointReport {
    pub fn new(p: &ScarfParams, amp: &ScatteringAmplitudes) -> Self {
        let c = amp.coefficients();
        Self {
            params: *p,
            k: amp.k,
            t: amp.t,
            r_left: amp.r_left,
            r_right: amp.r_right,
            T: c.transmitivity,
            R_left: c.reflectivity_left,
            R_right: c.reflectivity_right,
            unitarity_defect: c.unitarity_defect(),
            reciprocity_defect: c.reciprocity_defect(),
            pseudo_unitarity_defect: c.pseudo_unitarity_defect(),
        }
    }
}

pub fn point_report(
    p: &ScarfParams,
    k: WaveNumber,
    cfg: &AmplitudeConfig,
) -> Result<PointReport, CliError> {
    let amp = amplitudes_with(p, k, cfg).map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(PointReport::new(p, &amp))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub analytic: PointReport,
    pub oracle: OracleAmplitudes,
    pub dt_left: f64,
    pub dt_right: f64,
    pub dr_left: f64,
    pub dr_right: f64,
    /// Largest deviation relative to `max(|analytic|, 1)`.
    pub max_relative: f64,
}

pub fn oracle_comparison(
    p: &ScarfParams,
    k: WaveNumber,
    cfg: &OracleConfig,
) -> Result<OracleComparison, CliError> {
    let analytic = point_report(p, k, &AmplitudeConfig::default())?;
    let oracle = scatter_numeric_both(p, k, cfg).map_err(|e| CliError::Numerical(e.to_string()))?;
    let pairs = [
        (oracle.t_left, analytic.t),
        (oracle.t_right, analytic.t),
        (oracle.r_left, analytic.r_left),
        (oracle.r_right, analytic.r_right),
    ];
    let diffs = pairs.map(|(num, ana)| (num - ana).norm());
    let max_relative = pairs
        .iter()
        .zip(diffs)
        .map(|(&(_, ana), d)| d / ana.norm().max(1.0))
        .fold(0.0, f64::max);
    Ok(OracleComparison {
        analytic,
        oracle,
        dt_left: diffs[0],
        dt_right: diffs[1],
        dr_left: diffs[2],
        dr_right: diffs[3],
        max_relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for v in [0.25, 1e300, -3.0e-17, 0.1 + 0.2, 1.0, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn free_particle_point() {
        let p = ScarfParams::real(0.0, 0.0).unwrap();
        let r = point_report(
            &p,
            WaveNumber::new(0.8).unwrap(),
            &AmplitudeConfig::default(),
        )
        .unwrap();
        assert!((r.T - 1.0).abs() < 1e-15);
        assert_eq!(r.R_left, 0.0);
    }
}
