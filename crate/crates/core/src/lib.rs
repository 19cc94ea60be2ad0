//! Scattering from the complex PT-symmetric Scarf II potential.
//!
//! * [`special`]: complex log-Gamma and pole proximity.
//! * [`scarf`]: potential, closed-form amplitudes and coefficients.
//! * [`oracle`]: independent amplitudes from direct ODE integration.
//! * [`regimes`]: regime classification and the spectral-singularity scan.

pub mod error;
pub mod oracle;
pub mod regimes;
pub mod scarf;
pub mod special;

pub use error::{OracleError, RegimeError, ScatteringError, SpecialFunctionError};
pub use oracle::{
    mirror_check, scatter_numeric, scatter_numeric_both, OracleAmplitudes, OracleConfig,
    OracleResult,
};
pub use regimes::{
    classify, default_k_grid, k_grid, singularity_scan, unitary_closed_forms, ClassifyTolerances,
    RegimeFlag, RegimeReport, SingularityParams, SingularityScan, UnitaryCase,
};
pub use scarf::{
    amplitudes, coefficients, potential_value, reflection_amplitude, transmission_amplitude,
    transmitivity_closed_form, AmplitudeConfig, Coefficients, Incidence, ReflectionForm,
    ScarfParams, ScatteringAmplitudes, WaveNumber,
};
pub use special::{gamma, gamma_pole_distance, log_gamma, ComplexScalar};
