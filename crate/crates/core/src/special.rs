//! Complex log-Gamma and the handful of trigonometric helpers the amplitude
//! formulas need.
//!
//! `log_gamma` uses the Lanczos approximation (g = 7, nine coefficients) on
//! `Re z >= 0.5` and the reflection identity `Γ(z)Γ(1-z) = π / sin πz` below
//! that. The reflection branch evaluates `ln sin πz` on a branch that is
//! continuous in each open half-plane, so the result is the principal branch
//! of `ln Γ` (cut along the non-positive real axis) rather than a value that
//! is only correct modulo `2πi`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::SpecialFunctionError;

/// Complex argument or value of a special function.
pub type ComplexScalar = Complex64;

/// Distance below which `log_gamma` reports a pole.
pub const LOG_GAMMA_POLE_TOLERANCE: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// 0.5 * ln(2π)
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Principal-branch `ln Γ(z)`.
///
/// Fails with [`SpecialFunctionError::Pole`] when `z` lies within
/// [`LOG_GAMMA_POLE_TOLERANCE`] of a non-positive integer. Use
/// [`gamma_pole_distance`] to probe proximity without an error.
pub fn log_gamma(z: ComplexScalar) -> Result<ComplexScalar, SpecialFunctionError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecialFunctionError::NonFinite { re: z.re, im: z.im });
    }
    let distance = gamma_pole_distance(z);
    if distance < LOG_GAMMA_POLE_TOLERANCE {
        return Err(SpecialFunctionError::Pole {
            re: z.re,
            im: z.im,
            distance,
        });
    }
    if z.re >= 0.5 {
        return Ok(lanczos_log_gamma(z));
    }
    // Lower half-plane by conjugation; the real axis is taken as the limit
    // from above.
    if z.im < 0.0 {
        return Ok(reflected_log_gamma(z.conj()).conj());
    }
    Ok(reflected_log_gamma(z))
}

/// `Γ(z)`, computed as `exp(log_gamma(z))`.
pub fn gamma(z: ComplexScalar) -> Result<ComplexScalar, SpecialFunctionError> {
    log_gamma(z).map(|lg| lg.exp())
}

/// Distance from `z` to the nearest non-positive integer (a pole of Γ).
pub fn gamma_pole_distance(z: ComplexScalar) -> f64 {
    let nearest = if z.re >= 0.0 { 0.0 } else { z.re.round() };
    (z.re - nearest).hypot(z.im)
}

fn lanczos_log_gamma(z: ComplexScalar) -> ComplexScalar {
    let z = z - 1.0;
    let mut series = ComplexScalar::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// Reflection for `Re z < 0.5`, `Im z >= 0`.
fn reflected_log_gamma(z: ComplexScalar) -> ComplexScalar {
    ComplexScalar::new(PI.ln(), 0.0) - ln_sin_pi_upper(z) - lanczos_log_gamma(1.0 - z)
}

/// `ln sin(πz)` continuous on `Im z >= 0`, matching the real logarithm at
/// `z = 1/2`.
///
/// Uses `sin πz = (i/2) e^{-iπz} (1 - e^{2πiz})`; with `|e^{2πiz}| <= 1` the
/// factor `1 - e^{2πiz}` has non-negative real part, so its principal log
/// never wraps.
fn ln_sin_pi_upper(z: ComplexScalar) -> ComplexScalar {
    let i = ComplexScalar::i();
    let w = (2.0 * PI * i * z).exp();
    -i * PI * z + (1.0 - w).ln() + ComplexScalar::new(-std::f64::consts::LN_2, PI / 2.0)
}

/// `sin(πx)` with exact zeros at integers and exact ±1 at half-integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to r in [-1, 1] with x = 2m + r
    let r = x - 2.0 * (x / 2.0).round();
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    if r == 0.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// `cos(πx)` with exact zeros at half-integers and exact ±1 at integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}
