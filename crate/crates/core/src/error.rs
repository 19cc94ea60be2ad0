use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFunctionError {
    #[error("Gamma pole at {re}{im:+}i (distance {distance:e} to nearest non-positive integer)")]
    Pole { re: f64, im: f64, distance: f64 },
    #[error("non-finite argument {re}{im:+}i")]
    NonFinite { re: f64, im: f64 },
}

/// Failures of the closed-form amplitude evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("wave number must be finite and positive, got {0}")]
    InvalidWaveNumber(f64),
    /// A numerator Gamma argument sits on a pole: the amplitudes diverge at
    /// this `k`, which is the signature of a spectral singularity.
    #[error("numerator Gamma argument {re}{im:+}i is at a pole for k = {k}")]
    Singularity { k: f64, re: f64, im: f64 },
    #[error("|ln t| = {log_modulus:e} exceeds the bound {bound:e}")]
    Overflow { log_modulus: f64, bound: f64 },
    #[error("{0}")]
    Domain(&'static str),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("oracle needs k >= {min}, got {k}")]
    WaveNumberTooSmall { k: f64, min: f64 },
    #[error("integrator exhausted its budget of {max_steps} steps at x = {x}")]
    NonConvergence { max_steps: usize, x: f64 },
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("matching residual {residual:e} above bound {bound:e}")]
    Truncation { residual: f64, bound: f64 },
    /// Extracted `|t|` exceeded the singular-regime guard; plane-wave matching
    /// is no longer meaningful.
    #[error("singular regime: extracted |t| = {t_modulus:e}")]
    SingularRegime { t_modulus: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegimeError {
    #[error("k grid is empty")]
    EmptyGrid,
    #[error("k = {0} is below the minimum 1e-3")]
    WaveNumberTooSmall(f64),
    #[error("invalid k window [{lo}, {hi}]")]
    InvalidWindow { lo: f64, hi: f64 },
    #[error("need at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("parameters are in neither unitary case")]
    NotUnitary,
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
}
