//! Closed-form scattering from the complex Scarf II potential
//!
//! ```text
//! V(x) = -(B² + A² + A) sech²x + i B (2A + 1) tanh x sech x
//! ```
//!
//! in units with `2μ = ħ² = 1`, so `E = k²`. The transmission amplitude is a
//! ratio of eight Gamma functions and is evaluated entirely in log space,
//! exponentiated once at the end. Right incidence is left incidence with
//! `B → -B`, since `V(x; A, B) = V(-x; A, -B)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ScatteringError;
use crate::special::{cos_pi, gamma_pole_distance, log_gamma, sin_pi, ComplexScalar};

/// Parameter pair `(A, B)` of the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ScarfParams {
    a: ComplexScalar,
    b: ComplexScalar,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "A")]
    a: ComplexScalar,
    #[serde(rename = "B")]
    b: ComplexScalar,
}

impl TryFrom<RawParams> for ScarfParams {
    type Error = ScatteringError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        ScarfParams::new(raw.a, raw.b)
    }
}

impl From<ScarfParams> for RawParams {
    fn from(p: ScarfParams) -> Self {
        RawParams { a: p.a, b: p.b }
    }
}

impl ScarfParams {
    pub fn new(a: ComplexScalar, b: ComplexScalar) -> Result<Self, ScatteringError> {
        let finite = [a.re, a.im, b.re, b.im].iter().all(|v| v.is_finite());
        if !finite {
            return Err(ScatteringError::InvalidParams(format!(
                "A = {a}, B = {b} must be finite"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn real(a: f64, b: f64) -> Result<Self, ScatteringError> {
        Self::new(ComplexScalar::new(a, 0.0), ComplexScalar::new(b, 0.0))
    }

    pub fn a(&self) -> ComplexScalar {
        self.a
    }

    pub fn b(&self) -> ComplexScalar {
        self.b
    }

    pub fn is_real(&self) -> bool {
        self.a.im == 0.0 && self.b.im == 0.0
    }

    /// `(A, B)` as reals, if both imaginary parts vanish.
    pub fn real_parts(&self) -> Option<(f64, f64)> {
        self.is_real().then_some((self.a.re, self.b.re))
    }

    /// The same potential with `B → -B`, i.e. the mirror image `x → -x`.
    pub fn mirrored(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
        }
    }
}

impl fmt::Display for ScarfParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(A = {}, B = {})", self.a, self.b)
    }
}

/// Positive wave number `k = √E`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct WaveNumber(f64);

impl WaveNumber {
    pub fn new(k: f64) -> Result<Self, ScatteringError> {
        if k.is_finite() && k > 0.0 {
            Ok(Self(k))
        } else {
            Err(ScatteringError::InvalidWaveNumber(k))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn energy(self) -> f64 {
        self.0 * self.0
    }
}

impl TryFrom<f64> for WaveNumber {
    type Error = ScatteringError;

    fn try_from(k: f64) -> Result<Self, Self::Error> {
        Self::new(k)
    }
}

impl From<WaveNumber> for f64 {
    fn from(k: WaveNumber) -> f64 {
        k.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Incidence {
    Left,
    Right,
}

/// Which trigonometric form of the `B` dependence the reflection bracket
/// uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ReflectionForm {
    /// `cos πA sin πB / cosh πk + sin πA cos πB / sinh πk`.
    #[default]
    Trigonometric,
    /// `sin πB`, `cos πB` replaced by `sinh πB`, `cosh πB`. Kept only for
    /// numerical comparison; it does not describe this potential for real B.
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeConfig {
    /// A numerator Gamma argument closer than this to a pole is treated as a
    /// singularity.
    pub pole_tolerance: f64,
    /// Largest admissible `|Re ln t|`.
    pub max_log_modulus: f64,
    pub reflection_form: ReflectionForm,
}

impl Default for AmplitudeConfig {
    fn default() -> Self {
        Self {
            pole_tolerance: 1e-9,
            max_log_modulus: 700.0,
            reflection_form: ReflectionForm::Trigonometric,
        }
    }
}

/// Complex amplitudes at one wave number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub t: ComplexScalar,
    pub r_left: ComplexScalar,
    pub r_right: ComplexScalar,
    pub k: WaveNumber,
}

impl ScatteringAmplitudes {
    pub fn coefficients(&self) -> Coefficients {
        Coefficients {
            transmitivity: self.t.norm_sqr(),
            reflectivity_left: self.r_left.norm_sqr(),
            reflectivity_right: self.r_right.norm_sqr(),
        }
    }

    pub fn reflection(&self, side: Incidence) -> ComplexScalar {
        match side {
            Incidence::Left => self.r_left,
            Incidence::Right => self.r_right,
        }
    }
}

/// `T = |t|²`, `R_left = |r_left|²`, `R_right = |r_right|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub transmitivity: f64,
    pub reflectivity_left: f64,
    pub reflectivity_right: f64,
}

impl Coefficients {
    /// `R_left + T - 1`
    pub fn unitarity_defect(&self) -> f64 {
        self.reflectivity_left + self.transmitivity - 1.0
    }

    /// `R_left - R_right`
    pub fn reciprocity_defect(&self) -> f64 {
        self.reflectivity_left - self.reflectivity_right
    }

    /// `T + √(R_left R_right) - 1`
    pub fn pseudo_unitarity_defect(&self) -> f64 {
        self.transmitivity + (self.reflectivity_left * self.reflectivity_right).sqrt() - 1.0
    }
}

/// Potential at `x`.
pub fn potential_value(p: &ScarfParams, x: f64) -> ComplexScalar {
    let i = ComplexScalar::i();
    let sech = 1.0 / x.cosh();
    let (a, b) = (p.a, p.b);
    -(b * b + a * a + a) * (sech * sech) + i * b * (2.0 * a + 1.0) * (x.tanh() * sech)
}

fn gamma_arguments(p: &ScarfParams, k: f64) -> ([ComplexScalar; 4], [ComplexScalar; 4]) {
    let ik = ComplexScalar::new(0.0, k);
    let half = ComplexScalar::new(0.5, 0.0);
    let numerator = [-p.a - ik, 1.0 + p.a - ik, half + p.b - ik, half - p.b - ik];
    let denominator = [-ik, 1.0 - ik, half - ik, half - ik];
    (numerator, denominator)
}

/// Arguments of the four numerator Gamma functions of `t`, in the order
/// `-A - ik`, `1 + A - ik`, `1/2 + B - ik`, `1/2 - B - ik`.
pub fn numerator_gamma_arguments(p: &ScarfParams, k: f64) -> [ComplexScalar; 4] {
    gamma_arguments(p, k).0
}

/// `ln t_{A,B}(k)`. The numerator is even in `B`, so this is also
/// `ln t_right`.
pub fn log_transmission_amplitude(
    p: &ScarfParams,
    k: WaveNumber,
    cfg: &AmplitudeConfig,
) -> Result<ComplexScalar, ScatteringError> {
    let (numerator, denominator) = gamma_arguments(p, k.value());
    for z in numerator {
        if gamma_pole_distance(z) < cfg.pole_tolerance {
            return Err(ScatteringError::Singularity {
                k: k.value(),
                re: z.re,
                im: z.im,
            });
        }
    }
    let mut log_t = ComplexScalar::new(0.0, 0.0);
    for (num, den) in numerator.into_iter().zip(denominator) {
        log_t += log_gamma(num)? - log_gamma(den)?;
    }
    if log_t.re.is_nan() || log_t.re.abs() > cfg.max_log_modulus {
        return Err(ScatteringError::Overflow {
            log_modulus: log_t.re.abs(),
            bound: cfg.max_log_modulus,
        });
    }
    Ok(log_t)
}

pub fn transmission_amplitude(
    p: &ScarfParams,
    k: WaveNumber,
) -> Result<ComplexScalar, ScatteringError> {
    transmission_amplitude_with(p, k, &AmplitudeConfig::default())
}

pub fn transmission_amplitude_with(
    p: &ScarfParams,
    k: WaveNumber,
    cfg: &AmplitudeConfig,
) -> Result<ComplexScalar, ScatteringError> {
    Ok(log_transmission_amplitude(p, k, cfg)?.exp())
}

fn sin_pi_c(z: ComplexScalar) -> ComplexScalar {
    if z.im == 0.0 {
        ComplexScalar::new(sin_pi(z.re), 0.0)
    } else {
        (std::f64::consts::PI * z).sin()
    }
}

fn cos_pi_c(z: ComplexScalar) -> ComplexScalar {
    if z.im == 0.0 {
        ComplexScalar::new(cos_pi(z.re), 0.0)
    } else {
        (std::f64::consts::PI * z).cos()
    }
}

/// The factor `r / (i t)` for parameters `(A, B)`; pass `-B` for right
/// incidence.
fn reflection_bracket(
    a: ComplexScalar,
    b: ComplexScalar,
    k: f64,
    form: ReflectionForm,
) -> ComplexScalar {
    let pk = std::f64::consts::PI * k;
    let (sin_b, cos_b) = match form {
        ReflectionForm::Trigonometric => (sin_pi_c(b), cos_pi_c(b)),
        ReflectionForm::Hyperbolic => {
            let pb = std::f64::consts::PI * b;
            (pb.sinh(), pb.cosh())
        }
    };
    cos_pi_c(a) * sin_b / pk.cosh() + sin_pi_c(a) * cos_b / pk.sinh()
}

pub fn reflection_amplitude(
    p: &ScarfParams,
    k: WaveNumber,
    side: Incidence,
) -> Result<ComplexScalar, ScatteringError> {
    reflection_amplitude_with(p, k, side, &AmplitudeConfig::default())
}

pub fn reflection_amplitude_with(
    p: &ScarfParams,
    k: WaveNumber,
    side: Incidence,
    cfg: &AmplitudeConfig,
) -> Result<ComplexScalar, ScatteringError> {
    let p = match side {
        Incidence::Left => *p,
        Incidence::Right => p.mirrored(),
    };
    let t = transmission_amplitude_with(&p, k, cfg)?;
    let bracket = reflection_bracket(p.a, p.b, k.value(), cfg.reflection_form);
    Ok(t * ComplexScalar::i() * bracket)
}

/// `t`, `r_left` and `r_right` from a single transmission evaluation.
pub fn amplitudes(p: &ScarfParams, k: WaveNumber) -> Result<ScatteringAmplitudes, ScatteringError> {
    amplitudes_with(p, k, &AmplitudeConfig::default())
}

pub fn amplitudes_with(
    p: &ScarfParams,
    k: WaveNumber,
    cfg: &AmplitudeConfig,
) -> Result<ScatteringAmplitudes, ScatteringError> {
    let t = transmission_amplitude_with(p, k, cfg)?;
    let i = ComplexScalar::i();
    let kv = k.value();
    let form = cfg.reflection_form;
    Ok(ScatteringAmplitudes {
        t,
        r_left: t * i * reflection_bracket(p.a, p.b, kv, form),
        r_right: t * i * reflection_bracket(p.a, -p.b, kv, form),
        k,
    })
}

pub fn coefficients(p: &ScarfParams, k: WaveNumber) -> Result<Coefficients, ScatteringError> {
    amplitudes(p, k).map(|amp| amp.coefficients())
}

/// Real-parameter transmitivity from sines and hyperbolic sines only:
///
/// ```text
/// T = sinh²πk cosh²πk / ((sinh²πk + sin²πA)(sinh²πk + cos²πB))
/// ```
pub fn transmitivity_closed_form(p: &ScarfParams, k: WaveNumber) -> Result<f64, ScatteringError> {
    let (a, b) = p.real_parts().ok_or(ScatteringError::Domain(
        "closed-form T requires real A and B",
    ))?;
    let t = closed_form_t(a, b, k.value());
    if t.is_nan() || t < 0.0 {
        return Err(ScatteringError::Internal(format!(
            "closed-form T = {t} for A = {a}, B = {b}, k = {}",
            k.value()
        )));
    }
    Ok(t)
}

fn closed_form_t(a: f64, b: f64, k: f64) -> f64 {
    let s = (std::f64::consts::PI * k).sinh().powi(2);
    let sa = sin_pi(a).powi(2);
    let cb = cos_pi(b).powi(2);
    // s/(s + sa) * (s + 1)/(s + cb), arranged to survive s = inf
    1.0 / ((1.0 + sa / s) * (1.0 + (cb - 1.0) / (s + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn k(v: f64) -> WaveNumber {
        WaveNumber::new(v).unwrap()
    }

    fn real(a: f64, b: f64) -> ScarfParams {
        ScarfParams::real(a, b).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(WaveNumber::new(0.0).is_err());
        assert!(WaveNumber::new(-1.0).is_err());
        assert!(WaveNumber::new(f64::NAN).is_err());
        assert!(ScarfParams::real(f64::INFINITY, 0.0).is_err());
        let complex =
            ScarfParams::new(ComplexScalar::new(0.5, 0.1), ComplexScalar::new(0.0, 0.0)).unwrap();
        assert!(!complex.is_real());
        assert!(matches!(
            transmitivity_closed_form(&complex, k(1.0)),
            Err(ScatteringError::Domain(_))
        ));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(
            potential_value(&real(0.0, 0.0), 1.7),
            ComplexScalar::new(0.0, 0.0)
        );
        let v0 = potential_value(&real(0.5, 0.7), 0.0);
        assert!((v0 - ComplexScalar::new(-1.24, 0.0)).norm() < 1e-15);
        let p = real(0.5, 0.7);
        for &x in &[0.3, 1.0, 5.0] {
            let lhs = potential_value(&p, x);
            let rhs = potential_value(&p, -x).conj();
            assert!((lhs - rhs).norm() < 1e-15);
            // mirror: V(x; A, B) = V(-x; A, -B)
            let mirror = potential_value(&p.mirrored(), -x);
            assert!((lhs - mirror).norm() < 1e-15);
        }
    }

    #[test]
    fn free_particle() {
        let p = real(0.0, 0.0);
        let amp = amplitudes(&p, k(0.8)).unwrap();
        assert!((amp.t - 1.0).norm() < 1e-14);
        assert_eq!(amp.r_left, ComplexScalar::new(0.0, 0.0));
        assert_eq!(amp.r_right, ComplexScalar::new(0.0, 0.0));
    }

    #[test]
    fn invisible_point_has_unit_transmission() {
        let t = transmission_amplitude(&real(0.5, 0.5), k(1.0)).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-14);
        let r = reflection_amplitude(&real(0.5, 0.5), k(1.0), Incidence::Left).unwrap();
        assert!(r.norm() < 1e-15);
    }

    #[test]
    fn case_one_reflectivity() {
        let r = reflection_amplitude(&real(0.5, 0.25), k(0.5), Incidence::Left).unwrap();
        let c2 = (PI / 4.0).cos().powi(2);
        let want = c2 / ((PI / 2.0).sinh().powi(2) + c2);
        assert!((r.norm_sqr() - want).abs() < 1e-14);
    }

    #[test]
    fn generic_handedness() {
        let p = real(0.3, 0.8);
        let left = reflection_amplitude(&p, k(1.0), Incidence::Left).unwrap();
        let right = reflection_amplitude(&p, k(1.0), Incidence::Right).unwrap();
        assert!((left.norm() - right.norm()).abs() > 1e-6);
        let amp = amplitudes(&p, k(1.0)).unwrap();
        assert_eq!(amp.r_left, left);
        assert_eq!(amp.r_right, right);
    }

    #[test]
    fn right_incidence_transmission_is_mirror_invariant() {
        let p = real(0.3, 0.8);
        let t = transmission_amplitude(&p, k(1.3)).unwrap();
        let t_mirror = transmission_amplitude(&p.mirrored(), k(1.3)).unwrap();
        assert!((t - t_mirror).norm() < 1e-15 * t.norm().max(1.0));
    }

    #[test]
    fn closed_form_examples() {
        assert!((transmitivity_closed_form(&real(0.5, 0.5), k(2.0)).unwrap() - 1.0).abs() < 1e-15);
        let tanh2 = PI.tanh().powi(2);
        assert!(
            (transmitivity_closed_form(&real(0.5, 0.0), k(1.0)).unwrap() - tanh2).abs() < 1e-15
        );
        // k -> 0 limit of the anomalous case is 1 / cos²(π/4) = 2
        let near_zero = transmitivity_closed_form(&real(1.0, 0.25), k(1e-6)).unwrap();
        assert!((near_zero - 2.0).abs() < 1e-9);
        // large k stays finite
        assert_eq!(
            transmitivity_closed_form(&real(0.3, 0.2), k(500.0)).unwrap(),
            1.0
        );
    }

    #[test]
    fn coefficient_examples() {
        let c = coefficients(&real(0.5, 0.25), k(0.5)).unwrap();
        assert!(c.unitarity_defect().abs() < 1e-14);
        assert!(c.reciprocity_defect().abs() < 1e-15);
        let free = coefficients(&real(0.0, 0.0), k(2.7)).unwrap();
        assert!((free.transmitivity - 1.0).abs() < 1e-14);
        assert_eq!(free.reflectivity_left, 0.0);
        let c = coefficients(&real(0.3, 0.8), k(1.0)).unwrap();
        assert!(c.transmitivity <= 1.0);
        assert!(c.pseudo_unitarity_defect().abs() < 1e-9);
    }

    #[test]
    fn singular_argument_is_reported() {
        // A = -1 - i, B = i - 1/2 puts 1/2 + B - ik on the pole 0 at k = 1
        let p = ScarfParams::new(
            ComplexScalar::new(-1.0, -1.0),
            ComplexScalar::new(-0.5, 1.0),
        )
        .unwrap();
        let err = transmission_amplitude(&p, k(1.0)).unwrap_err();
        assert!(matches!(err, ScatteringError::Singularity { .. }), "{err}");
        assert!(transmission_amplitude(&p, k(1.01)).is_ok());
    }

    #[test]
    fn overflow_bound_is_enforced() {
        let cfg = AmplitudeConfig {
            max_log_modulus: 1.0,
            ..AmplitudeConfig::default()
        };
        let p = ScarfParams::new(
            ComplexScalar::new(-1.0, -1.0),
            ComplexScalar::new(-0.5, 1.0),
        )
        .unwrap();
        let err = transmission_amplitude_with(&p, k(1.0 + 1e-6), &cfg).unwrap_err();
        assert!(matches!(err, ScatteringError::Overflow { .. }));
    }

    #[test]
    fn hyperbolic_form_differs_for_real_b() {
        let cfg = AmplitudeConfig {
            reflection_form: ReflectionForm::Hyperbolic,
            ..AmplitudeConfig::default()
        };
        let p = real(0.5, 0.25);
        let printed = reflection_amplitude(&p, k(0.5), Incidence::Left).unwrap();
        let alt = reflection_amplitude_with(&p, k(0.5), Incidence::Left, &cfg).unwrap();
        assert!((printed - alt).norm() > 1e-3);
    }
}
