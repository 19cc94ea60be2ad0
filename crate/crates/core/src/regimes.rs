//! Named parametric regimes of the Scarf II scattering problem and the
//! residuals that certify them on a wave-number grid.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{RegimeError, ScatteringError};
use crate::scarf::{amplitudes, Coefficients, ScarfParams, WaveNumber};
use crate::special::{cos_pi, gamma_pole_distance, sin_pi, ComplexScalar};

/// Grids are clamped to at least this wave number.
pub const MIN_GRID_K: f64 = 1e-3;

/// Reported in place of `T` (and `R`) where the amplitudes diverge.
pub const SINGULAR_T_CAP: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeFlag {
    UnitaryCase1,
    UnitaryCase2,
    Reciprocal,
    Invisible,
    Anomalous,
    PseudoUnitary,
    GenericHanded,
}

impl RegimeFlag {
    pub const ALL: [RegimeFlag; 7] = [
        RegimeFlag::UnitaryCase1,
        RegimeFlag::UnitaryCase2,
        RegimeFlag::Reciprocal,
        RegimeFlag::Invisible,
        RegimeFlag::Anomalous,
        RegimeFlag::PseudoUnitary,
        RegimeFlag::GenericHanded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegimeFlag::UnitaryCase1 => "unitary_case1",
            RegimeFlag::UnitaryCase2 => "unitary_case2",
            RegimeFlag::Reciprocal => "reciprocal",
            RegimeFlag::Invisible => "invisible",
            RegimeFlag::Anomalous => "anomalous",
            RegimeFlag::PseudoUnitary => "pseudo_unitary",
            RegimeFlag::GenericHanded => "generic_handed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyTolerances {
    /// Absolute tolerance for snapping parameters to integers and
    /// half-integers.
    pub snap: f64,
    /// Threshold for flags decided by a numerical residual.
    pub residual: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        Self {
            snap: 1e-9,
            residual: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub params: ScarfParams,
    pub k_grid: Vec<WaveNumber>,
    pub flags: BTreeSet<RegimeFlag>,
    /// Worst case over the grid of the quantity behind each flag, reported
    /// for every flag whether or not it is set.
    pub residuals: BTreeMap<RegimeFlag, f64>,
}

impl RegimeReport {
    pub fn has(&self, flag: RegimeFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn residual(&self, flag: RegimeFlag) -> f64 {
        self.residuals.get(&flag).copied().unwrap_or(f64::NAN)
    }
}

/// `count` evenly spaced wave numbers on `[start, stop]`, clamped below at
/// [`MIN_GRID_K`].
pub fn k_grid(start: f64, stop: f64, count: usize) -> Result<Vec<WaveNumber>, ScatteringError> {
    linspace(start, stop, count)
        .into_iter()
        .map(|k| WaveNumber::new(k.max(MIN_GRID_K)))
        .collect()
}

/// Thirty points on `[0.1, 3]`.
pub fn default_k_grid() -> Vec<WaveNumber> {
    k_grid(0.1, 3.0, 30).expect("static grid is valid")
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

fn near_half_integer(x: f64, tol: f64) -> bool {
    near_integer(x - 0.5, tol)
}

fn real_within(z: ComplexScalar, tol: f64) -> Option<f64> {
    (z.im.abs() <= tol).then_some(z.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitaryCase {
    /// `A = n + 1/2`, `B` real.
    HalfIntegerA,
    /// `B` integer, `A` real.
    IntegerB,
}

impl UnitaryCase {
    /// The case `p` falls into, preferring [`UnitaryCase::HalfIntegerA`] when
    /// both apply (the closed forms coincide there).
    pub fn detect(p: &ScarfParams, snap: f64) -> Option<Self> {
        let a = real_within(p.a(), snap)?;
        let b = real_within(p.b(), snap)?;
        if near_half_integer(a, snap) {
            Some(UnitaryCase::HalfIntegerA)
        } else if near_integer(b, snap) {
            Some(UnitaryCase::IntegerB)
        } else {
            None
        }
    }

    /// `(R, T)` at a signed, nonzero wave number. Both are even in `k`.
    pub fn closed_form(self, a: f64, b: f64, k: f64) -> (f64, f64) {
        let s = (PI * k).sinh().powi(2);
        let c = match self {
            UnitaryCase::HalfIntegerA => cos_pi(b).powi(2),
            UnitaryCase::IntegerB => sin_pi(a).powi(2),
        };
        (c / (s + c), 1.0 / (1.0 + c / s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryClosedForm {
    pub case: UnitaryCase,
    pub reflectivity: f64,
    pub transmitivity: f64,
}

/// Closed-form `(R, T)` in the unitary cases; `R + T = 1` up to rounding.
pub fn unitary_closed_forms(
    p: &ScarfParams,
    k: WaveNumber,
    snap: f64,
) -> Result<UnitaryClosedForm, RegimeError> {
    let case = UnitaryCase::detect(p, snap).ok_or(RegimeError::NotUnitary)?;
    let (reflectivity, transmitivity) = case.closed_form(p.a().re, p.b().re, k.value());
    Ok(UnitaryClosedForm {
        case,
        reflectivity,
        transmitivity,
    })
}

/// Classifies `p` over `k_grid`.
pub fn classify(
    p: &ScarfParams,
    k_grid: &[WaveNumber],
    tol: &ClassifyTolerances,
) -> Result<RegimeReport, RegimeError> {
    if k_grid.is_empty() {
        return Err(RegimeError::EmptyGrid);
    }
    if let Some(k) = k_grid.iter().find(|k| k.value() < MIN_GRID_K) {
        return Err(RegimeError::WaveNumberTooSmall(k.value()));
    }
    let coeffs = k_grid
        .iter()
        .map(|&k| amplitudes(p, k).map(|amp| amp.coefficients()))
        .collect::<Result<Vec<Coefficients>, _>>()?;
    let worst = |f: &dyn Fn(&Coefficients) -> f64| coeffs.iter().map(f).fold(0.0, f64::max);

    let unitarity = worst(&|c| c.unitarity_defect().abs());
    let reciprocity = worst(&|c| c.reciprocity_defect().abs());
    let pseudo = worst(&|c| c.pseudo_unitarity_defect().abs());
    let invisibility = worst(&|c| {
        c.reflectivity_left
            .max(c.reflectivity_right)
            .max((c.transmitivity - 1.0).abs())
    });
    let max_t = coeffs
        .iter()
        .map(|c| c.transmitivity)
        .fold(f64::NEG_INFINITY, f64::max);

    let real = match (real_within(p.a(), tol.snap), real_within(p.b(), tol.snap)) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    let case1 = real.is_some_and(|(a, _)| near_half_integer(a, tol.snap));
    let case2 = real.is_some_and(|(_, b)| near_integer(b, tol.snap));
    let invisible = real.is_some_and(|(a, b)| {
        (near_half_integer(a, tol.snap) && near_half_integer(b, tol.snap))
            || (near_integer(a, tol.snap) && near_integer(b, tol.snap))
    });
    let anomalous = max_t > 1.0 + tol.residual;
    let pseudo_unitary = !anomalous && pseudo < tol.residual;
    let reciprocal = reciprocity < tol.residual;

    let mut flags = BTreeSet::new();
    for (flag, set) in [
        (RegimeFlag::UnitaryCase1, case1),
        (RegimeFlag::UnitaryCase2, case2),
        (RegimeFlag::Reciprocal, reciprocal),
        (RegimeFlag::Invisible, invisible),
        (RegimeFlag::Anomalous, anomalous),
        (RegimeFlag::PseudoUnitary, pseudo_unitary),
        (RegimeFlag::GenericHanded, !reciprocal),
    ] {
        if set {
            flags.insert(flag);
        }
    }
    let residuals = BTreeMap::from([
        (RegimeFlag::UnitaryCase1, unitarity),
        (RegimeFlag::UnitaryCase2, unitarity),
        (RegimeFlag::Reciprocal, reciprocity),
        (RegimeFlag::Invisible, invisibility),
        (RegimeFlag::Anomalous, max_t - 1.0),
        (RegimeFlag::PseudoUnitary, pseudo),
        (RegimeFlag::GenericHanded, reciprocity),
    ]);

    Ok(RegimeReport {
        params: *p,
        k_grid: k_grid.to_vec(),
        flags,
        residuals,
    })
}

/// Spectral-singularity family `A = -(n+1) - iα`, `B = iα - (n + 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityParams {
    pub n: u32,
    pub alpha: f64,
}

impl SingularityParams {
    pub fn new(n: u32, alpha: f64) -> Result<Self, RegimeError> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self { n, alpha })
        } else {
            Err(RegimeError::InvalidAlpha(alpha))
        }
    }

    pub fn params(&self) -> ScarfParams {
        let n = self.n as f64;
        ScarfParams::new(
            ComplexScalar::new(-(n + 1.0), -self.alpha),
            ComplexScalar::new(-(n + 0.5), self.alpha),
        )
        .expect("finite by construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularitySample {
    pub k: f64,
    pub transmitivity: f64,
    pub reflectivity_left: f64,
    pub reflectivity_right: f64,
    /// The sample sits on a pole (or overflowed) and carries the cap.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityScan {
    pub params: SingularityParams,
    pub window: (f64, f64),
    pub spacing: f64,
    pub k_star: f64,
    pub peak_t: f64,
    /// Wave number inside the window at which a numerator Gamma argument
    /// lands exactly on a pole, if any.
    pub pole_k: Option<f64>,
    /// A pole lies in the window and the sampled peak is within one grid
    /// spacing of it.
    pub pole_confirmed: bool,
    pub samples: Vec<SingularitySample>,
}

/// Samples `T`, `R_left`, `R_right` on `samples` points of `window` and
/// locates the peak of `T`.
pub fn singularity_scan(
    s: &SingularityParams,
    window: (f64, f64),
    samples: usize,
) -> Result<SingularityScan, RegimeError> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo >= MIN_GRID_K && lo < hi) {
        return Err(RegimeError::InvalidWindow { lo, hi });
    }
    if samples < 3 {
        return Err(RegimeError::TooFewSamples(samples));
    }
    let p = s.params();
    let spacing = (hi - lo) / (samples - 1) as f64;

    let mut points = Vec::with_capacity(samples);
    for k in linspace(lo, hi, samples) {
        let sample = match amplitudes(&p, WaveNumber::new(k)?) {
            Ok(amp) => {
                let c = amp.coefficients();
                SingularitySample {
                    k,
                    transmitivity: c.transmitivity.min(SINGULAR_T_CAP),
                    reflectivity_left: c.reflectivity_left.min(SINGULAR_T_CAP),
                    reflectivity_right: c.reflectivity_right.min(SINGULAR_T_CAP),
                    capped: c.transmitivity >= SINGULAR_T_CAP,
                }
            }
            Err(ScatteringError::Singularity { .. } | ScatteringError::Overflow { .. }) => {
                SingularitySample {
                    k,
                    transmitivity: SINGULAR_T_CAP,
                    reflectivity_left: SINGULAR_T_CAP,
                    reflectivity_right: SINGULAR_T_CAP,
                    capped: true,
                }
            }
            Err(e) => return Err(e.into()),
        };
        points.push(sample);
    }

    let peak = points
        .iter()
        .copied()
        .reduce(|best, s| {
            if s.transmitivity > best.transmitivity {
                s
            } else {
                best
            }
        })
        .expect("at least three samples");

    let pole_k = real_axis_pole(&p, lo, hi);
    let pole_confirmed = pole_k.is_some_and(|kp| (peak.k - kp).abs() <= spacing);

    Ok(SingularityScan {
        params: *s,
        window,
        spacing,
        k_star: peak.k,
        peak_t: peak.transmitivity,
        pole_k,
        pole_confirmed,
        samples: points,
    })
}

/// Each numerator argument has the form `c - ik`; it can only reach a pole
/// on the real `k` axis at `k = Im c`.
fn real_axis_pole(p: &ScarfParams, lo: f64, hi: f64) -> Option<f64> {
    let half = ComplexScalar::new(0.5, 0.0);
    let offsets = [-p.a(), 1.0 + p.a(), half + p.b(), half - p.b()];
    offsets
        .into_iter()
        .filter(|c| c.im >= lo && c.im <= hi)
        .find(|c| gamma_pole_distance(ComplexScalar::new(c.re, 0.0)) < 1e-12)
        .map(|c| c.im)
}
